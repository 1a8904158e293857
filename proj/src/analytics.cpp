#include "darknet/analytics.hpp"

#include <algorithm>
#include <cmath>

namespace darknet {

namespace {
constexpr double kSecondsPerDay = 86400.0;
}

PortCounts count_ports(std::span<const ProbeEvent> events) {
  PortCounts counts;
  for (const auto& e : events) ++counts[e.dst_port];
  return counts;
}

void merge_counts(PortCounts& into, const PortCounts& from) {
  for (const auto& [port, n] : from) into[port] += n;
}

PortRanking rank_ports(const PortCounts& counts) {
  PortRanking ranking;
  ranking.entries.reserve(counts.size());
  for (const auto& [port, n] : counts) {
    ranking.entries.push_back({port, n, 0.0});
    ranking.total += n;
  }
  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [](const PortRankingEntry& a, const PortRankingEntry& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.port < b.port;
            });
  if (ranking.total > 0)
    for (auto& e : ranking.entries)
      e.share = static_cast<double>(e.count) / static_cast<double>(ranking.total);
  return ranking;
}

std::vector<std::uint16_t> PortRanking::top_ports(std::size_t k) const {
  std::vector<std::uint16_t> ports;
  ports.reserve(std::min(k, entries.size()));
  for (std::size_t i = 0; i < entries.size() && i < k; ++i)
    ports.push_back(entries[i].port);
  return ports;
}

PortRanking traffic_by_port(std::span<const ProbeEvent> events) {
  return rank_ports(count_ports(events));
}

CoverageCurve cumulative_coverage(const PortRanking& ranking) {
  CoverageCurve curve;
  curve.points.reserve(ranking.entries.size());
  double cumulative = 0.0;
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    cumulative += ranking.entries[i].share;
    curve.points.push_back({i + 1, cumulative});
    // Tolerance so exact-fraction corpora (e.g. uniform shares) are not
    // missed by accumulated rounding.
    if (!curve.n_for_80 && cumulative >= 0.8 - 1e-9) curve.n_for_80 = i + 1;
    if (!curve.n_for_90 && cumulative >= 0.9 - 1e-9) curve.n_for_90 = i + 1;
  }
  return curve;
}

std::vector<ProberProfile> top_probers(std::span<const ProbeEvent> events,
                                       double threshold_per_day, RateSpan span_mode) {
  if (events.empty()) return {};
  std::unordered_map<std::uint32_t, ProberProfile> by_ip;
  double t_min = events.front().timestamp;
  double t_max = t_min;
  std::unordered_map<std::uint32_t, std::pair<double, double>> spans;
  for (const auto& e : events) {
    t_min = std::min(t_min, e.timestamp);
    t_max = std::max(t_max, e.timestamp);
    auto& profile = by_ip[e.src_ip];
    profile.src_ip = e.src_ip;
    ++profile.total_syn;
    ++profile.port_counts[e.dst_port];
    auto [it, inserted] = spans.try_emplace(e.src_ip, e.timestamp, e.timestamp);
    if (!inserted) {
      it->second.first = std::min(it->second.first, e.timestamp);
      it->second.second = std::max(it->second.second, e.timestamp);
    }
  }
  // A single-instant span still counts as one day of activity.
  const double capture_days = std::max((t_max - t_min) / kSecondsPerDay, 1.0);

  std::vector<ProberProfile> selected;
  for (auto& [ip, profile] : by_ip) {
    const auto& [first, last] = spans[ip];
    profile.active_span_days = (last - first) / kSecondsPerDay;
    const double denom = span_mode == RateSpan::kCapture
                             ? capture_days
                             : std::max(profile.active_span_days, 1.0);
    profile.mean_daily_rate = static_cast<double>(profile.total_syn) / denom;
    if (profile.mean_daily_rate > threshold_per_day)
      selected.push_back(std::move(profile));
  }
  std::sort(selected.begin(), selected.end(),
            [](const ProberProfile& a, const ProberProfile& b) {
              if (a.total_syn != b.total_syn) return a.total_syn > b.total_syn;
              return a.src_ip < b.src_ip;
            });
  return selected;
}

PortRanking port_profile_of(std::span<const ProberProfile> probers) {
  PortCounts counts;
  for (const auto& p : probers)
    for (const auto& [port, n] : p.port_counts) counts[port] += n;
  return rank_ports(counts);
}

std::vector<CountryEntry> traffic_by_country(std::span<const ProbeEvent> events,
                                             const GeoDb& db) {
  std::map<std::string, std::uint64_t> counts;
  // Small per-run cache: darknet sources repeat heavily.
  std::unordered_map<std::uint32_t, const std::string*> seen;
  static const std::string kUnknown = "??";
  for (const auto& e : events) {
    auto it = seen.find(e.src_ip);
    const std::string* code;
    if (it != seen.end()) {
      code = it->second;
    } else {
      auto looked = db.lookup(e.src_ip);
      auto [slot, _] =
          counts.try_emplace(looked ? *looked : kUnknown, 0);
      code = &slot->first;
      seen.emplace(e.src_ip, code);
    }
    ++counts[*code];
  }
  std::uint64_t total = 0;
  for (const auto& [_, n] : counts) total += n;
  std::vector<CountryEntry> out;
  out.reserve(counts.size());
  for (const auto& [country, n] : counts)
    out.push_back({country, n,
                   total ? static_cast<double>(n) / static_cast<double>(total) : 0.0});
  std::sort(out.begin(), out.end(), [](const CountryEntry& a, const CountryEntry& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.country < b.country;
  });
  return out;
}

}  // namespace darknet
