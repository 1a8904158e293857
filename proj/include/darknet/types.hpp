#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace darknet {

// Bits of the raw TCP flag byte.
enum TcpFlag : std::uint8_t {
  kFin = 0x01,
  kSyn = 0x02,
  kRst = 0x04,
  kPsh = 0x08,
  kAck = 0x10,
  kUrg = 0x20,
  kEce = 0x40,
  kCwr = 0x80,
};

struct PacketRecord {
  double timestamp = 0.0;  // seconds since epoch, fractional
  std::uint32_t src_ip = 0;
  std::uint32_t dst_ip = 0;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::uint8_t tcp_flags = 0;

  bool has_flag(TcpFlag f) const { return (tcp_flags & f) != 0; }

  bool operator==(const PacketRecord&) const = default;
};

// The SYN-filtered projection driving all downstream analytics.
struct ProbeEvent {
  double timestamp = 0.0;
  std::uint32_t src_ip = 0;
  std::uint16_t dst_port = 0;

  bool operator==(const ProbeEvent&) const = default;
};

std::optional<std::uint32_t> parse_ipv4(std::string_view s);
std::string format_ipv4(std::uint32_t ip);

}  // namespace darknet
