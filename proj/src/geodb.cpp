#include "darknet/geodb.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace darknet {
namespace {

std::uint32_t parse_bound(std::string_view s, std::size_t line_no) {
  if (auto ip = parse_ipv4(s)) return *ip;
  std::uint32_t value = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::runtime_error("geodb line " + std::to_string(line_no) +
                             ": bad range bound");
  return value;
}

}  // namespace

GeoDb::GeoDb(std::vector<Range> ranges) : ranges_(std::move(ranges)) {
  std::sort(ranges_.begin(), ranges_.end(),
            [](const Range& a, const Range& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < ranges_.size(); ++i) {
    if (ranges_[i].start > ranges_[i].end)
      throw std::invalid_argument("geodb: range start exceeds end");
    if (i > 0 && ranges_[i].start <= ranges_[i - 1].end)
      throw std::invalid_argument("geodb: overlapping ranges");
  }
}

GeoDb GeoDb::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<Range> ranges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && !(line[0] >= '0' && line[0] <= '9')) continue;  // header
    auto c1 = line.find(',');
    auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::runtime_error("geodb line " + std::to_string(line_no) +
                               ": expected range_start,range_end,country");
    std::string_view view(line);
    Range r;
    r.start = parse_bound(view.substr(0, c1), line_no);
    r.end = parse_bound(view.substr(c1 + 1, c2 - c1 - 1), line_no);
    r.country = line.substr(c2 + 1);
    ranges.push_back(std::move(r));
  }
  return GeoDb(std::move(ranges));
}

std::optional<std::string> GeoDb::lookup(std::uint32_t ip) const {
  auto it = std::upper_bound(
      ranges_.begin(), ranges_.end(), ip,
      [](std::uint32_t value, const Range& r) { return value < r.start; });
  if (it == ranges_.begin()) return std::nullopt;
  --it;
  if (ip >= it->start && ip <= it->end) return it->country;
  return std::nullopt;
}

}  // namespace darknet
