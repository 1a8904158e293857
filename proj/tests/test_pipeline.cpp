#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "darknet/ingest.hpp"
#include "darknet/pipeline.hpp"
#include "darknet/synth.hpp"
#include "json.hpp"

using namespace darknet;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("darknet_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_packet_log(const fs::path& path, const std::vector<ProbeEvent>& events) {
  std::ofstream out(path);
  out << "timestamp,src_ip,dst_ip,src_port,dst_port,flags\n";
  for (const auto& e : events) {
    PacketRecord rec;
    rec.timestamp = e.timestamp;
    rec.src_ip = e.src_ip;
    rec.dst_ip = 0xC0000210;
    rec.src_port = 40000;
    rec.dst_port = e.dst_port;
    rec.tcp_flags = kSyn;
    out << serialize_record(rec) << '\n';
  }
}

std::vector<ProbeEvent> small_corpus() {
  ZipfTrafficSpec spec;
  spec.seed = 1;
  for (int p = 1; p <= 40; ++p) spec.ports.push_back(static_cast<std::uint16_t>(p));
  spec.exponent = 1.2;
  spec.n_events = 20000;
  spec.t_start = 1e9;
  spec.t_end = 1e9 + 400 * 3600.0;
  spec.n_sources = 5;
  return gen_zipf_traffic(spec);
}

}  // namespace

TEST_CASE("config file round-trip of the main keys") {
  auto dir = temp_dir("config");
  {
    std::ofstream out(dir / "run.toml");
    out << "# pipeline configuration\n"
        << "input = \"log.csv\"\n"
        << "out = \"results\"\n"
        << "stages = [\"stats\", \"series\"]\n"
        << "threshold = 200.5\n"
        << "top_k = 10\n"
        << "resolutions = [\"1h\", \"6h\"]\n"
        << "forecast_targets = [23, 80]\n"
        << "select_features = false\n"
        << "seed = 42\n"
        << "[grid]\n"
        << "p_max = 3\n";
  }
  // grid.p_max is not a known flat key.
  CHECK_THROWS(load_run_config((dir / "run.toml").string()));
  {
    std::ofstream out(dir / "run2.toml");
    out << "input = 'log.csv'\n"
        << "threshold = 200.5\n"
        << "grid_p_max = 3\n"
        << "resolutions = [\"1h\", \"6h\"]\n"
        << "forecast_targets = [23, 80]\n";
  }
  auto cfg = load_run_config((dir / "run2.toml").string());
  CHECK(cfg.input == "log.csv");
  CHECK(cfg.prober_threshold == doctest::Approx(200.5));
  CHECK(cfg.grid_p_max == 3);
  CHECK(cfg.resolutions == std::vector<std::string>{"1h", "6h"});
  CHECK(cfg.forecast_targets == std::vector<int>{23, 80});
  // Untouched keys keep their defaults.
  CHECK(cfg.top_k == 30);
  CHECK(cfg.series_ports_top == 550);
  CHECK(cfg.grid_p_min == 1);
  CHECK(cfg.grid_increment == 10);
}

TEST_CASE("stats-only pipeline writes rankings with shares summing to 1") {
  auto dir = temp_dir("stats_only");
  write_packet_log(dir / "log.csv", small_corpus());

  RunConfig cfg;
  cfg.input = (dir / "log.csv").string();
  cfg.out_dir = (dir / "out").string();
  cfg.stages = {"stats"};
  auto result = run_pipeline(cfg);
  CHECK(result.complete);
  CHECK(fs::exists(dir / "out" / "port_ranking.csv"));
  CHECK(fs::exists(dir / "out" / "coverage.csv"));
  CHECK(fs::exists(dir / "out" / "manifest.json"));

  std::ifstream ranking(dir / "out" / "port_ranking_full.csv");
  std::string line;
  std::getline(ranking, line);  // header
  double total = 0;
  while (std::getline(ranking, line)) {
    auto last = line.rfind(',');
    total += std::stod(line.substr(last + 1));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("empty input completes with a warning and valid empty outputs") {
  auto dir = temp_dir("empty");
  {
    std::ofstream out(dir / "log.csv");
    out << "timestamp,src_ip,dst_ip,src_port,dst_port,flags\n";
  }
  RunConfig cfg;
  cfg.input = (dir / "log.csv").string();
  cfg.out_dir = (dir / "out").string();
  auto result = run_pipeline(cfg);
  CHECK(result.complete);
  REQUIRE_FALSE(result.warnings.empty());
  CHECK(result.warnings[0].find("no events") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "port_ranking.csv"));
  CHECK(fs::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("full pipeline writes every stage artifact and a complete manifest") {
  auto dir = temp_dir("full");
  write_packet_log(dir / "log.csv", small_corpus());

  RunConfig cfg;
  cfg.input = (dir / "log.csv").string();
  cfg.out_dir = (dir / "out").string();
  cfg.series_ports_top = 10;
  cfg.matrix_ports_top = 10;
  cfg.prober_threshold = 10.0;
  cfg.resolutions = {"1h", "6h"};
  cfg.forecast_targets = {1};
  cfg.grid_p_max = 2;
  auto result = run_pipeline(cfg);
  CHECK(result.complete);
  for (const char* name :
       {"port_ranking.csv", "coverage.csv", "top_probers.csv", "ports_targeted_cdf.csv",
        "matrix_all.csv", "series_1h.csv", "series_6h.csv", "forecast_port_1_ar.json",
        "forecast_port_1_var.json", "summary.csv", "ar_vs_var.csv"})
    CHECK(fs::exists(dir / "out" / name));

  std::ifstream manifest(dir / "out" / "manifest.json");
  auto j = nlohmann::json::parse(manifest);
  CHECK(j.at("complete").get<bool>());
  CHECK(j.at("artifacts").size() == result.artifacts.size());
  for (const auto& name : result.artifacts) {
    const std::string hash = j.at("artifacts").at(name);
    CHECK(hash.size() == 16);
  }
}

TEST_CASE("pipeline output is deterministic") {
  auto dir = temp_dir("determinism");
  write_packet_log(dir / "log.csv", small_corpus());

  RunConfig cfg;
  cfg.input = (dir / "log.csv").string();
  cfg.series_ports_top = 8;
  cfg.matrix_ports_top = 8;
  cfg.prober_threshold = 10.0;
  cfg.resolutions = {"1h"};
  cfg.grid_p_max = 2;

  cfg.out_dir = (dir / "out_a").string();
  run_pipeline(cfg);
  cfg.out_dir = (dir / "out_b").string();
  run_pipeline(cfg);

  std::ifstream ma(dir / "out_a" / "manifest.json"), mb(dir / "out_b" / "manifest.json");
  auto ja = nlohmann::json::parse(ma), jb = nlohmann::json::parse(mb);
  CHECK(ja.at("artifacts") == jb.at("artifacts"));
}

TEST_CASE("a failing stage reports its name and keeps partial outputs") {
  auto dir = temp_dir("failing");
  ZipfTrafficSpec spec;
  spec.seed = 2;
  for (int p = 1; p <= 10; ++p) spec.ports.push_back(static_cast<std::uint16_t>(p));
  spec.exponent = 1.2;
  spec.n_events = 500;
  spec.t_start = 1e9;
  spec.t_end = 1e9 + 20 * 3600.0;  // 20h -> one 24h bucket, unforecastable
  write_packet_log(dir / "log.csv", gen_zipf_traffic(spec));
  RunConfig cfg;
  cfg.input = (dir / "log.csv").string();
  cfg.out_dir = (dir / "out").string();
  cfg.stages = {"stats", "forecast"};
  cfg.forecast_resolution = "24h";
  try {
    run_pipeline(cfg);
    FAIL("expected stage failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("forecast") != std::string::npos);
  }
  CHECK(fs::exists(dir / "out" / "port_ranking.csv"));
  std::ifstream manifest(dir / "out" / "manifest.json");
  auto j = nlohmann::json::parse(manifest);
  CHECK_FALSE(j.at("complete").get<bool>());
}
