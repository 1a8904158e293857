#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "darknet/types.hpp"

namespace darknet {

struct ParseError : std::runtime_error {
  ParseError(std::size_t line_no, std::string field_name, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ", field '" +
                           field_name + "': " + what),
        line(line_no),
        field(std::move(field_name)) {}

  std::size_t line;
  std::string field;
};

// SYN set and ACK clear excludes SYN-ACK backscatter; SynAny keeps it.
enum class SynPolicy { kSynNoAck, kSynAny };

// One line of the canonical header log:
//   timestamp,src_ip,dst_ip,src_port,dst_port,flags
PacketRecord parse_record(std::string_view line, std::size_t line_no = 1);
std::string serialize_record(const PacketRecord& rec);

bool is_probe(const PacketRecord& rec, SynPolicy policy = SynPolicy::kSynNoAck);
ProbeEvent to_probe_event(const PacketRecord& rec);

std::vector<ProbeEvent> filter_syn(const std::vector<PacketRecord>& records,
                                   SynPolicy policy = SynPolicy::kSynNoAck);

// Streams a header-log CSV, invoking `sink` for each record. An optional
// header line is detected by a non-numeric first field. Returns the number
// of records read.
std::size_t read_packet_log(std::istream& in,
                            const std::function<void(const PacketRecord&)>& sink);
std::size_t read_packet_log_file(const std::string& path,
                                 const std::function<void(const PacketRecord&)>& sink);

std::vector<ProbeEvent> load_probe_events(const std::string& path,
                                          SynPolicy policy = SynPolicy::kSynNoAck);

}  // namespace darknet
