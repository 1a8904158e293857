// Naive reference implementations used as independent oracles. These stay
// deliberately simple and must not share code with the library paths they
// check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "darknet/types.hpp"

namespace oracles {

inline std::map<std::uint16_t, std::uint64_t> recount_ports(
    std::span<const darknet::ProbeEvent> events) {
  std::map<std::uint16_t, std::uint64_t> counts;
  for (const auto& e : events) ++counts[e.dst_port];
  return counts;
}

// Per-IP totals by a direct pass.
inline std::map<std::uint32_t, std::uint64_t> recount_sources(
    std::span<const darknet::ProbeEvent> events) {
  std::map<std::uint32_t, std::uint64_t> counts;
  for (const auto& e : events) ++counts[e.src_ip];
  return counts;
}

// Linear scan over the range table.
struct GeoRange {
  std::uint32_t start, end;
  std::string country;
};

inline std::string linear_geolocate(std::uint32_t ip,
                                    std::span<const GeoRange> ranges) {
  for (const auto& r : ranges)
    if (ip >= r.start && ip <= r.end) return r.country;
  return "??";
}

// Pairwise scan over one prober's time-ordered port sequence.
inline std::map<std::pair<std::uint16_t, std::uint16_t>, std::uint64_t>
pairwise_transitions(std::span<const std::uint16_t> ports) {
  std::map<std::pair<std::uint16_t, std::uint16_t>, std::uint64_t> counts;
  for (std::size_t i = 0; i + 1 < ports.size(); ++i)
    ++counts[{ports[i], ports[i + 1]}];
  return counts;
}

// Double-loop bucket recount.
inline std::vector<std::uint64_t> recount_buckets(
    std::span<const darknet::ProbeEvent> events, std::uint16_t port,
    std::int64_t origin_s, std::int64_t resolution_s, std::size_t n_buckets) {
  std::vector<std::uint64_t> values(n_buckets, 0);
  for (std::size_t b = 0; b < n_buckets; ++b) {
    const double lo = static_cast<double>(origin_s + static_cast<std::int64_t>(b) * resolution_s);
    const double hi = lo + static_cast<double>(resolution_s);
    for (const auto& e : events)
      if (e.dst_port == port && e.timestamp >= lo && e.timestamp < hi) ++values[b];
  }
  return values;
}

// Smallest prefix of descending counts reaching `fraction` of the total.
inline std::size_t prefix_threshold(std::vector<std::uint64_t> counts,
                                    double fraction) {
  std::sort(counts.begin(), counts.end(), std::greater<>());
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    acc += counts[i];
    if (static_cast<double>(acc) >= fraction * static_cast<double>(total) - 1e-9)
      return i + 1;
  }
  return counts.size();
}

// Index-by-index regression construction for AR-style problems.
inline std::pair<std::vector<std::vector<double>>, std::vector<double>>
naive_design(std::span<const double> series, int p, int t0, int t1) {
  std::vector<std::vector<double>> X;
  std::vector<double> y;
  for (int t = std::max(t0, p); t < t1; ++t) {
    std::vector<double> row{1.0};
    for (int h = 1; h <= p; ++h) row.push_back(series[static_cast<std::size_t>(t - h)]);
    X.push_back(std::move(row));
    y.push_back(series[static_cast<std::size_t>(t)]);
  }
  return {X, y};
}

}  // namespace oracles
