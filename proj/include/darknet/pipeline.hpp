#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "darknet/ingest.hpp"

namespace darknet {

// End-to-end run configuration. Defaults mirror the standard settings:
// 150 SYN/day top-prober threshold, top-30 display cutoff, top-550 series
// scope, p in [1,10] with window increment 10, all five resolutions.
struct RunConfig {
  std::string input;
  std::string geodb;
  std::string out_dir = "out";
  std::vector<std::string> stages = {"stats", "graphs", "series", "forecast"};

  SynPolicy syn_policy = SynPolicy::kSynNoAck;
  double prober_threshold = 150.0;
  std::string rate_span = "capture";
  int top_k = 30;

  int matrix_ports_top = 30;
  bool drop_self_loops = false;
  std::string normalize = "row";

  int series_ports_top = 550;
  std::vector<std::string> resolutions = {"1h", "3h", "6h", "12h", "24h"};

  std::vector<int> forecast_targets;  // ports; empty = top-1 port
  std::string forecast_resolution = "1h";
  int grid_p_min = 1;
  int grid_p_max = 10;
  int grid_increment = 10;
  bool select_features_enabled = true;

  std::string format = "csv";
  std::uint64_t seed = 1;
  int jobs = 1;
};

// Minimal flat TOML: `key = value` with strings, integers, floats, bools
// and one-line arrays; `[section]` headers prefix keys with "section.".
RunConfig load_run_config(const std::string& path);

std::uint64_t fnv1a64_file(const std::string& path);

struct PipelineResult {
  bool complete = true;
  std::vector<std::string> artifacts;
  std::vector<std::string> warnings;
};

// Runs the enabled stages, writes artifacts under config.out_dir plus a
// manifest.json listing each artifact with its content hash.
PipelineResult run_pipeline(const RunConfig& config);

}  // namespace darknet
