#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "darknet/geodb.hpp"
#include "darknet/types.hpp"

namespace darknet {

struct PortRankingEntry {
  std::uint16_t port;
  std::uint64_t count;
  double share;

  bool operator==(const PortRankingEntry&) const = default;
};

// Ports sorted by count descending, ties by ascending port number.
// Shares are fractions of the total over all ports, not just the top-K.
struct PortRanking {
  std::vector<PortRankingEntry> entries;
  std::uint64_t total = 0;

  std::vector<std::uint16_t> top_ports(std::size_t k) const;
};

struct CoveragePoint {
  std::size_t n_ports;
  double cumulative_share;
};

struct CoverageCurve {
  std::vector<CoveragePoint> points;
  // Smallest n reaching each threshold; unset when the curve never does.
  std::optional<std::size_t> n_for_80;
  std::optional<std::size_t> n_for_90;
};

struct ProberProfile {
  std::uint32_t src_ip = 0;
  std::uint64_t total_syn = 0;
  double active_span_days = 0.0;
  double mean_daily_rate = 0.0;
  std::map<std::uint16_t, std::uint64_t> port_counts;
};

// Denominator of the mean daily rate: whole capture span, or the prober's
// own first-to-last activity span.
enum class RateSpan { kCapture, kActive };

// Mergeable fold state for per-port counting; workers build partials and
// merge them before ranking.
using PortCounts = std::unordered_map<std::uint16_t, std::uint64_t>;

PortCounts count_ports(std::span<const ProbeEvent> events);
void merge_counts(PortCounts& into, const PortCounts& from);
PortRanking rank_ports(const PortCounts& counts);

PortRanking traffic_by_port(std::span<const ProbeEvent> events);

CoverageCurve cumulative_coverage(const PortRanking& ranking);

std::vector<ProberProfile> top_probers(std::span<const ProbeEvent> events,
                                       double threshold_per_day,
                                       RateSpan span_mode = RateSpan::kCapture);

PortRanking port_profile_of(std::span<const ProberProfile> probers);

struct CountryEntry {
  std::string country;  // "??" groups unknown geolocations
  std::uint64_t count;
  double share;
};

std::vector<CountryEntry> traffic_by_country(std::span<const ProbeEvent> events,
                                             const GeoDb& db);

}  // namespace darknet
