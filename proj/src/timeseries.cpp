#include "darknet/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace darknet {

bool is_allowed_resolution(std::int64_t seconds) {
  for (auto r : kAllowedResolutions)
    if (r == seconds) return true;
  return false;
}

std::string resolution_name(std::int64_t seconds) {
  return std::to_string(seconds / kHour) + "h";
}

std::int64_t parse_resolution(const std::string& name) {
  if (name.empty() || name.back() != 'h')
    throw std::invalid_argument("bad resolution '" + name + "' (expect e.g. 1h)");
  int hours = 0;
  auto [p, ec] = std::from_chars(name.data(), name.data() + name.size() - 1, hours);
  if (ec != std::errc{} || p != name.data() + name.size() - 1)
    throw std::invalid_argument("bad resolution '" + name + "'");
  std::int64_t seconds = static_cast<std::int64_t>(hours) * kHour;
  if (!is_allowed_resolution(seconds))
    throw std::invalid_argument("resolution must be one of 1h,3h,6h,12h,24h");
  return seconds;
}

RateMatrix bucketize(std::span<const ProbeEvent> events, std::int64_t resolution_s,
                     std::span<const std::uint16_t> ports) {
  if (!is_allowed_resolution(resolution_s))
    throw std::invalid_argument("resolution must be one of 1h,3h,6h,12h,24h");
  if (ports.empty()) throw std::invalid_argument("bucketize: empty port list");

  RateMatrix m;
  m.ports.assign(ports.begin(), ports.end());
  m.resolution_s = resolution_s;
  if (events.empty()) {
    m.values.assign(m.ports.size(), {});
    return m;
  }

  double t_min = events.front().timestamp;
  double t_max = t_min;
  for (const auto& e : events) {
    t_min = std::min(t_min, e.timestamp);
    t_max = std::max(t_max, e.timestamp);
  }
  // Origin snaps down to a whole UTC resolution boundary.
  m.origin_s = static_cast<std::int64_t>(std::floor(t_min / resolution_s)) * resolution_s;
  const auto bucket_of = [&](double t) {
    return static_cast<std::size_t>((t - static_cast<double>(m.origin_s)) / resolution_s);
  };
  const std::size_t n_buckets = bucket_of(t_max) + 1;
  m.values.assign(m.ports.size(), std::vector<std::uint64_t>(n_buckets, 0));

  std::unordered_map<std::uint16_t, std::size_t> port_index;
  for (std::size_t i = 0; i < m.ports.size(); ++i) port_index[m.ports[i]] = i;
  for (const auto& e : events) {
    auto it = port_index.find(e.dst_port);
    if (it == port_index.end()) continue;
    ++m.values[it->second][bucket_of(e.timestamp)];
  }
  m.trailing_partial =
      t_max < static_cast<double>(m.origin_s + static_cast<std::int64_t>(n_buckets) * resolution_s);
  return m;
}

RateMatrix resample(const RateMatrix& m, std::int64_t coarser_s) {
  if (coarser_s <= 0 || coarser_s % m.resolution_s != 0)
    throw std::invalid_argument("resample: target resolution must be a multiple of " +
                                std::to_string(m.resolution_s));
  const std::size_t factor = static_cast<std::size_t>(coarser_s / m.resolution_s);
  if (factor == 1) return m;

  RateMatrix out;
  out.ports = m.ports;
  out.resolution_s = coarser_s;
  // Re-snap the origin so coarse buckets sit on coarse boundaries.
  out.origin_s = (m.origin_s / coarser_s) * coarser_s;
  const std::size_t lead = static_cast<std::size_t>((m.origin_s - out.origin_s) / m.resolution_s);
  const std::size_t n_fine = m.n_buckets();
  const std::size_t n_coarse = n_fine == 0 ? 0 : (lead + n_fine + factor - 1) / factor;
  out.values.assign(m.ports.size(), std::vector<std::uint64_t>(n_coarse, 0));
  for (std::size_t p = 0; p < m.values.size(); ++p)
    for (std::size_t b = 0; b < n_fine; ++b)
      out.values[p][(lead + b) / factor] += m.values[p][b];
  out.trailing_partial = true;
  return out;
}

void write_series_csv(const RateMatrix& m, std::ostream& out) {
  out << "bucket_start";
  for (auto p : m.ports) out << ",port_" << p;
  out << '\n';
  for (std::size_t b = 0; b < m.n_buckets(); ++b) {
    out << (m.origin_s + static_cast<std::int64_t>(b) * m.resolution_s);
    for (const auto& series : m.values) out << ',' << series[b];
    out << '\n';
  }
}

void write_series_csv_file(const RateMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_series_csv(m, out);
}

int SeriesTable::index_of_port(std::uint16_t port) const {
  for (std::size_t i = 0; i < ports.size(); ++i)
    if (ports[i] == port) return static_cast<int>(i);
  return -1;
}

SeriesTable to_series_table(const RateMatrix& m) {
  SeriesTable t;
  t.ports = m.ports;
  t.resolution_s = m.resolution_s;
  t.origin_s = m.origin_s;
  t.columns.reserve(m.values.size());
  for (const auto& series : m.values)
    t.columns.emplace_back(series.begin(), series.end());
  return t;
}

SeriesTable read_series_csv(std::istream& in) {
  SeriesTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("series csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::stringstream header(line);
  std::string cell;
  std::getline(header, cell, ',');  // bucket_start
  while (std::getline(header, cell, ',')) {
    if (cell.rfind("port_", 0) != 0)
      throw std::runtime_error("series csv: bad column '" + cell + "'");
    t.ports.push_back(static_cast<std::uint16_t>(std::stoul(cell.substr(5))));
  }
  t.columns.assign(t.ports.size(), {});

  bool first_row = true;
  std::int64_t prev_start = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream row(line);
    std::getline(row, cell, ',');
    std::int64_t start = std::stoll(cell);
    if (first_row) {
      t.origin_s = start;
      first_row = false;
    } else if (t.resolution_s == kHour && t.columns[0].size() == 1) {
      t.resolution_s = start - prev_start;
    }
    prev_start = start;
    for (std::size_t i = 0; i < t.ports.size(); ++i) {
      if (!std::getline(row, cell, ','))
        throw std::runtime_error("series csv: short row");
      t.columns[i].push_back(std::stod(cell));
    }
  }
  return t;
}

SeriesTable read_series_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_series_csv(in);
}

}  // namespace darknet
