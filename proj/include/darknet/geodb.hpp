#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "darknet/types.hpp"

namespace darknet {

// Immutable IP-range to country-code table, binary-searched per lookup.
// Rows are (range_start, range_end, ISO 3166-1 alpha-2 code), sorted by
// range_start with no overlapping ranges.
class GeoDb {
 public:
  struct Range {
    std::uint32_t start;
    std::uint32_t end;  // inclusive
    std::string country;
  };

  // Validates ordering and non-overlap; throws std::invalid_argument.
  explicit GeoDb(std::vector<Range> ranges);
  GeoDb() = default;

  // CSV rows: range_start,range_end,country with dotted-quad or u32 bounds.
  static GeoDb load_csv(const std::string& path);

  std::optional<std::string> lookup(std::uint32_t ip) const;

  const std::vector<Range>& ranges() const { return ranges_; }
  bool empty() const { return ranges_.empty(); }

 private:
  std::vector<Range> ranges_;
};

}  // namespace darknet
