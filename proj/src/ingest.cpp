#include "darknet/ingest.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>

namespace darknet {
namespace {

std::string_view next_field(std::string_view& rest, std::size_t line_no,
                            const char* name) {
  if (rest.empty()) throw ParseError(line_no, name, "missing field");
  auto comma = rest.find(',');
  std::string_view field = rest.substr(0, comma);
  rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  return field;
}

double parse_timestamp(std::string_view s, std::size_t line_no) {
  double value = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError(line_no, "timestamp", "not a number");
  if (value <= 0) throw ParseError(line_no, "timestamp", "must be positive");
  return value;
}

std::uint32_t parse_ip_field(std::string_view s, std::size_t line_no,
                             const char* name) {
  if (s.find(':') != std::string_view::npos)
    throw ParseError(line_no, name, "IPv6 not supported");
  auto ip = parse_ipv4(s);
  if (!ip) throw ParseError(line_no, name, "invalid IPv4 address");
  return *ip;
}

std::uint16_t parse_port(std::string_view s, std::size_t line_no, const char* name) {
  unsigned value = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError(line_no, name, "not an integer");
  if (value > 65535) throw ParseError(line_no, name, "port out of range");
  return static_cast<std::uint16_t>(value);
}

std::uint8_t parse_flags(std::string_view s, std::size_t line_no) {
  unsigned value = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError(line_no, "flags", "not an integer");
  if (value > 255) throw ParseError(line_no, "flags", "flag byte out of range");
  return static_cast<std::uint8_t>(value);
}

}  // namespace

PacketRecord parse_record(std::string_view line, std::size_t line_no) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::string_view rest = line;
  PacketRecord rec;
  rec.timestamp = parse_timestamp(next_field(rest, line_no, "timestamp"), line_no);
  rec.src_ip = parse_ip_field(next_field(rest, line_no, "src_ip"), line_no, "src_ip");
  rec.dst_ip = parse_ip_field(next_field(rest, line_no, "dst_ip"), line_no, "dst_ip");
  rec.src_port = parse_port(next_field(rest, line_no, "src_port"), line_no, "src_port");
  rec.dst_port = parse_port(next_field(rest, line_no, "dst_port"), line_no, "dst_port");
  rec.tcp_flags = parse_flags(next_field(rest, line_no, "flags"), line_no);
  if (!rest.empty()) throw ParseError(line_no, "flags", "trailing fields");
  return rec;
}

std::string serialize_record(const PacketRecord& rec) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.6f,%s,%s,%u,%u,%u", rec.timestamp,
                format_ipv4(rec.src_ip).c_str(), format_ipv4(rec.dst_ip).c_str(),
                rec.src_port, rec.dst_port, rec.tcp_flags);
  return buf;
}

bool is_probe(const PacketRecord& rec, SynPolicy policy) {
  if (!rec.has_flag(kSyn)) return false;
  return policy == SynPolicy::kSynAny || !rec.has_flag(kAck);
}

ProbeEvent to_probe_event(const PacketRecord& rec) {
  return ProbeEvent{rec.timestamp, rec.src_ip, rec.dst_port};
}

std::vector<ProbeEvent> filter_syn(const std::vector<PacketRecord>& records,
                                   SynPolicy policy) {
  std::vector<ProbeEvent> out;
  out.reserve(records.size());
  for (const auto& rec : records)
    if (is_probe(rec, policy)) out.push_back(to_probe_event(rec));
  return out;
}

std::size_t read_packet_log(std::istream& in,
                            const std::function<void(const PacketRecord&)>& sink) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    if (line_no == 1) {
      // Optional header: non-numeric first field.
      char c = line[0];
      if (!(c >= '0' && c <= '9') && c != '.' && c != '-') continue;
    }
    sink(parse_record(line, line_no));
    ++n;
  }
  return n;
}

std::size_t read_packet_log_file(const std::string& path,
                                 const std::function<void(const PacketRecord&)>& sink) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_packet_log(in, sink);
}

std::vector<ProbeEvent> load_probe_events(const std::string& path, SynPolicy policy) {
  std::vector<ProbeEvent> events;
  read_packet_log_file(path, [&](const PacketRecord& rec) {
    if (is_probe(rec, policy)) events.push_back(to_probe_event(rec));
  });
  return events;
}

}  // namespace darknet
