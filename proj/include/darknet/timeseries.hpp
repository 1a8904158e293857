#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "darknet/types.hpp"

namespace darknet {

inline constexpr std::int64_t kHour = 3600;
inline constexpr std::int64_t kAllowedResolutions[] = {
    kHour, 3 * kHour, 6 * kHour, 12 * kHour, 24 * kHour};

bool is_allowed_resolution(std::int64_t seconds);
std::string resolution_name(std::int64_t seconds);
std::int64_t parse_resolution(const std::string& name);  // "1h", "3h", ...

// Aligned per-port bucket counts at one resolution. origin_s is the first
// bucket's start, truncated down to a whole resolution boundary in UTC.
struct RateMatrix {
  std::vector<std::uint16_t> ports;
  std::int64_t resolution_s = kHour;
  std::int64_t origin_s = 0;
  std::vector<std::vector<std::uint64_t>> values;  // per port, length n_buckets
  bool trailing_partial = false;

  std::size_t n_buckets() const { return values.empty() ? 0 : values[0].size(); }
};

RateMatrix bucketize(std::span<const ProbeEvent> events, std::int64_t resolution_s,
                     std::span<const std::uint16_t> ports);

// Sums fine buckets into coarse ones; coarser must be an integer multiple
// of m's resolution. Throws std::invalid_argument otherwise.
RateMatrix resample(const RateMatrix& m, std::int64_t coarser_s);

// Series store CSV: header `bucket_start,port_23,port_80,...`, one row per
// bucket. This file is the forecasting input contract.
void write_series_csv(const RateMatrix& m, std::ostream& out);
void write_series_csv_file(const RateMatrix& m, const std::string& path);

// Real-valued view used by the forecasting engine; column j is port j's
// series. Also loadable straight from the series CSV.
struct SeriesTable {
  std::vector<std::uint16_t> ports;
  std::int64_t resolution_s = kHour;
  std::int64_t origin_s = 0;
  std::vector<std::vector<double>> columns;  // per port

  std::size_t length() const { return columns.empty() ? 0 : columns[0].size(); }
  std::size_t n_series() const { return columns.size(); }
  int index_of_port(std::uint16_t port) const;  // -1 if absent
};

SeriesTable to_series_table(const RateMatrix& m);
SeriesTable read_series_csv(std::istream& in);
SeriesTable read_series_csv_file(const std::string& path);

}  // namespace darknet
