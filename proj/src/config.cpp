#include <cctype>
#include <charconv>
#include <fstream>
#include <stdexcept>

#include "darknet/pipeline.hpp"

namespace darknet {
namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> parse_array(const std::string& value) {
  std::vector<std::string> items;
  std::string inner = value.substr(1, value.size() - 2);
  std::string current;
  for (char c : inner) {
    if (c == ',') {
      if (auto item = trim(current); !item.empty()) items.push_back(unquote(item));
      current.clear();
    } else {
      current += c;
    }
  }
  if (auto item = trim(current); !item.empty()) items.push_back(unquote(item));
  return items;
}

long to_int(const std::string& s, const std::string& key) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::runtime_error("config: key '" + key + "' expects an integer");
  return v;
}

double to_double(const std::string& s, const std::string& key) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw std::runtime_error("config: key '" + key + "' expects a number");
  return v;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  RunConfig cfg;
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key = value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    std::string value = trim(std::string_view(line).substr(eq + 1));
    const bool is_array = value.size() >= 2 && value.front() == '[' && value.back() == ']';
    value = is_array ? value : unquote(value);

    if (key == "input") cfg.input = value;
    else if (key == "geodb") cfg.geodb = value;
    else if (key == "out" || key == "out_dir") cfg.out_dir = value;
    else if (key == "stages") cfg.stages = parse_array(value);
    else if (key == "syn_ack_policy")
      cfg.syn_policy = value == "any" ? SynPolicy::kSynAny : SynPolicy::kSynNoAck;
    else if (key == "threshold" || key == "prober_threshold")
      cfg.prober_threshold = to_double(value, key);
    else if (key == "rate_span") cfg.rate_span = value;
    else if (key == "top_k") cfg.top_k = static_cast<int>(to_int(value, key));
    else if (key == "matrix_ports_top") cfg.matrix_ports_top = static_cast<int>(to_int(value, key));
    else if (key == "drop_self_loops") cfg.drop_self_loops = value == "true";
    else if (key == "normalize") cfg.normalize = value;
    else if (key == "series_ports_top") cfg.series_ports_top = static_cast<int>(to_int(value, key));
    else if (key == "resolutions") cfg.resolutions = parse_array(value);
    else if (key == "forecast_targets") {
      cfg.forecast_targets.clear();
      for (const auto& item : parse_array(value))
        cfg.forecast_targets.push_back(static_cast<int>(to_int(item, key)));
    } else if (key == "forecast_resolution") cfg.forecast_resolution = value;
    else if (key == "grid_p_min") cfg.grid_p_min = static_cast<int>(to_int(value, key));
    else if (key == "grid_p_max") cfg.grid_p_max = static_cast<int>(to_int(value, key));
    else if (key == "grid_increment") cfg.grid_increment = static_cast<int>(to_int(value, key));
    else if (key == "select_features") cfg.select_features_enabled = value == "true";
    else if (key == "format") cfg.format = value;
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(value, key));
    else if (key == "jobs") cfg.jobs = static_cast<int>(to_int(value, key));
    else
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": unknown key '" + key + "'");
  }
  return cfg;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash " + path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

}  // namespace darknet
