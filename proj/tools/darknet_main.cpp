#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "darknet/analytics.hpp"
#include "darknet/forecast.hpp"
#include "darknet/graphs.hpp"
#include "darknet/pipeline.hpp"
#include "darknet/reports.hpp"
#include "darknet/synth.hpp"
#include "darknet/timeseries.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace darknet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

SynPolicy policy_from(const std::string& name) {
  return name == "any" ? SynPolicy::kSynAny : SynPolicy::kSynNoAck;
}

std::string format_packet_log(const std::vector<ProbeEvent>& events) {
  std::ostringstream out;
  out << "timestamp,src_ip,dst_ip,src_port,dst_port,flags\n";
  for (const auto& e : events) {
    PacketRecord rec;
    rec.timestamp = e.timestamp;
    rec.src_ip = e.src_ip;
    rec.dst_ip = 0xC0000210;  // 192.0.2.16, the telescope
    rec.src_port = 40000;
    rec.dst_port = e.dst_port;
    rec.tcp_flags = kSyn;
    out << serialize_record(rec) << '\n';
  }
  return out.str();
}

int cmd_synth(const std::string& spec_path, const std::string& out_path) {
  std::ifstream in(spec_path);
  if (!in) throw std::runtime_error("cannot open " + spec_path);
  auto j = nlohmann::json::parse(in);
  const std::string kind = j.at("kind");

  if (kind == "ar" || kind == "var") {
    std::vector<std::vector<double>> columns;
    if (kind == "ar") {
      ArSpec spec;
      spec.seed = j.value("seed", 1ULL);
      spec.coefficients = j.at("coefficients").get<std::vector<double>>();
      spec.innovation_std = j.value("innovation_std", 1.0);
      spec.length = j.at("length").get<std::size_t>();
      for (const auto& sw : j.value("regime_switches", nlohmann::json::array()))
        spec.regime_switches.push_back(
            {sw.at("t").get<std::size_t>(),
             sw.at("coefficients").get<std::vector<double>>()});
      columns.push_back(gen_ar(spec));
    } else {
      VarSpec spec;
      spec.seed = j.value("seed", 1ULL);
      spec.n_series = j.at("n_series").get<std::size_t>();
      spec.p = j.value("p", 1);
      spec.intercepts = j.at("intercepts").get<std::vector<double>>();
      spec.coefficients =
          j.at("coefficients").get<std::vector<std::vector<std::vector<double>>>>();
      spec.innovation_stds = j.at("innovation_stds").get<std::vector<double>>();
      spec.length = j.at("length").get<std::size_t>();
      columns = gen_var(spec);
    }
    std::ostringstream out;
    out << "bucket_start";
    for (std::size_t i = 0; i < columns.size(); ++i) out << ",port_" << (i + 1);
    out << '\n';
    for (std::size_t t = 0; t < columns[0].size(); ++t) {
      out << (t * 3600);
      for (const auto& col : columns) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), ",%.9g", col[t]);
        out << buf;
      }
      out << '\n';
    }
    write_file(out_path, out.str());
    return kExitOk;
  }

  std::vector<ProbeEvent> events;
  if (kind == "markov_prober") {
    MarkovProberSpec spec;
    spec.seed = j.value("seed", 1ULL);
    if (auto ip = parse_ipv4(j.value("src_ip", std::string("203.0.113.1"))))
      spec.src_ip = *ip;
    spec.ports = j.at("ports").get<std::vector<std::uint16_t>>();
    spec.transition = j.at("transition").get<std::vector<std::vector<double>>>();
    spec.n_events = j.at("n_events").get<std::size_t>();
    spec.t_start = j.value("t_start", 1e9);
    spec.dt = j.value("dt", 1.0);
    events = gen_markov_prober(spec);
  } else if (kind == "zipf_traffic") {
    ZipfTrafficSpec spec;
    spec.seed = j.value("seed", 1ULL);
    if (j.contains("ports")) {
      spec.ports = j.at("ports").get<std::vector<std::uint16_t>>();
    } else {
      const auto count = j.at("port_count").get<std::uint16_t>();
      const auto base = j.value("port_base", std::uint16_t{1});
      for (std::uint16_t i = 0; i < count; ++i)
        spec.ports.push_back(static_cast<std::uint16_t>(base + i));
    }
    spec.exponent = j.value("exponent", 1.0);
    spec.n_events = j.at("n_events").get<std::size_t>();
    spec.t_start = j.value("t_start", 1e9);
    spec.t_end = j.value("t_end", spec.t_start + 86400.0);
    spec.n_sources = j.value("n_sources", 1U);
    events = gen_zipf_traffic(spec);
  } else {
    throw std::runtime_error("unknown synth kind '" + kind + "'");
  }
  write_file(out_path, format_packet_log(events));
  return kExitOk;
}

int cmd_forecast(const std::string& series_path, int target_port,
                 const std::string& model, int p, int window, bool do_grid,
                 bool do_select, const std::string& out_dir,
                 const std::string& resolution) {
  auto table = read_series_csv_file(series_path);
  if (!resolution.empty()) table.resolution_s = parse_resolution(resolution);
  const int target = table.index_of_port(static_cast<std::uint16_t>(target_port));
  if (target < 0) throw std::runtime_error("target port not present in series file");
  const auto kind = model == "var" ? ModelKind::kVar : ModelKind::kAr;
  const int length = static_cast<int>(table.length());
  const int span_begin = (3 * length) / 4;

  DesignParams params{p, window};
  if (do_grid) {
    auto grid = grid_search(table, target, ModelKind::kAr);
    params = grid.best;
  }

  std::vector<int> features{target};
  if (kind == ModelKind::kVar) {
    if (do_select) {
      auto selection = select_features(table, target, params,
                                       std::max(span_begin - params.window, params.p));
      features = selection.features;
    } else {
      features.clear();
      for (std::size_t i = 0; i < table.n_series(); ++i)
        features.push_back(static_cast<int>(i));
    }
  }
  auto report = rolling_forecast(table, target, kind, params, features, span_begin,
                                 length, kind == ModelKind::kVar);

  const fs::path out(out_dir);
  const std::string tag = "port_" + std::to_string(target_port) + "_" + model;
  write_file(out / ("forecast_" + tag + ".json"), eval_report_json(report));
  write_file(out / ("forecast_" + tag + ".csv"),
             predictions_csv(report, table.origin_s));
  std::cout << model << " p=" << report.params.p << " N=" << report.params.window
            << " r2=" << report.r2 << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"darknet telescope traffic analytics and forecasting"};
  app.require_subcommand(1);

  std::string input, geodb, out_dir = "out", format = "csv";
  std::string syn_policy = "exclude-ack";
  std::uint64_t seed = 1;
  int jobs = 1;
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "csv or json");
  app.add_option("--seed", seed, "PRNG seed");
  app.add_option("--jobs", jobs, "worker cap");

  auto* ingest = app.add_subcommand("ingest", "parse and SYN-filter a packet log");
  ingest->add_option("--input", input)->required();
  ingest->add_option("--geodb", geodb);
  ingest->add_option("--syn-ack-policy", syn_policy, "exclude-ack (default) or any");

  auto* stats = app.add_subcommand("stats", "port/prober/country rankings");
  stats->add_option("--input", input)->required();
  stats->add_option("--geodb", geodb);
  stats->add_option("--syn-ack-policy", syn_policy);
  int top_k = 30;
  double threshold = 150.0;
  std::string rate_span = "capture";
  stats->add_option("--top-k", top_k);
  stats->add_option("--threshold", threshold, "top-prober SYN/day threshold");
  stats->add_option("--rate-span", rate_span, "capture or active");

  auto* graph = app.add_subcommand("graph", "port-transition graphs and matrices");
  graph->add_option("--input", input)->required();
  graph->add_option("--syn-ack-policy", syn_policy);
  bool per_prober = false, matrix = false, drop_self_loops = false;
  std::string scope = "all", normalize = "row", graph_format = "dot";
  int ports_top = 30;
  graph->add_flag("--per-prober", per_prober);
  graph->add_flag("--matrix", matrix);
  graph->add_option("--scope", scope, "all or top");
  graph->add_option("--ports-top", ports_top);
  graph->add_option("--normalize", normalize, "row or global");
  graph->add_flag("--drop-self-loops", drop_self_loops);
  graph->add_option("--graph-format", graph_format, "dot or json");
  graph->add_option("--threshold", threshold);

  auto* series = app.add_subcommand("series", "bucketized per-port rate series");
  series->add_option("--input", input)->required();
  series->add_option("--syn-ack-policy", syn_policy);
  std::vector<std::string> resolutions = {"1h", "3h", "6h", "12h", "24h"};
  int series_top = 550;
  series->add_option("--resolutions", resolutions)->delimiter(',');
  series->add_option("--ports-top", series_top);

  auto* forecast = app.add_subcommand("forecast", "AR/VAR one-step forecasting");
  std::string series_path, model = "ar", resolution;
  int target_port = 0, order_p = 1, window_n = 10;
  bool grid = false, select = false;
  forecast->add_option("--series", series_path)->required();
  forecast->add_option("--target-port", target_port)->required();
  forecast->add_option("--model", model, "ar or var");
  forecast->add_option("--p", order_p);
  forecast->add_option("--window", window_n);
  forecast->add_flag("--grid-search", grid);
  forecast->add_flag("--select-features", select);
  forecast->add_option("--resolution", resolution);

  auto* synth = app.add_subcommand("synth", "deterministic synthetic corpora");
  std::string spec_path, synth_out;
  synth->add_option("--spec", spec_path, "JSON generator spec")->required();
  synth->add_option("--out-file", synth_out)->required();

  auto* run = app.add_subcommand("run", "full pipeline from a config file");
  std::string config_path;
  run->add_option("--config", config_path)->required();

  // Global options (--out, --format, ...) may also appear after the
  // subcommand name.
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) return cmd_synth(spec_path, synth_out);

    if (*run) {
      auto config = load_run_config(config_path);
      if (app.count("--out")) config.out_dir = out_dir;
      if (app.count("--seed")) config.seed = seed;
      auto result = run_pipeline(config);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << result.artifacts.size() << " artifacts in " << config.out_dir
                << "\n";
      return kExitOk;
    }

    if (*ingest) {
      std::ostringstream out;
      out << "timestamp,src_ip,dst_port" << (geodb.empty() ? "" : ",country") << '\n';
      GeoDb db;
      if (!geodb.empty()) db = GeoDb::load_csv(geodb);
      auto events = load_probe_events(input, policy_from(syn_policy));
      for (const auto& e : events) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f,%s,%u", e.timestamp,
                      format_ipv4(e.src_ip).c_str(), e.dst_port);
        out << buf;
        if (!geodb.empty()) out << ',' << db.lookup(e.src_ip).value_or("??");
        out << '\n';
      }
      write_file(fs::path(out_dir) / "events.csv", out.str());
      std::cout << events.size() << " probe events\n";
      return kExitOk;
    }

    if (*forecast)
      return cmd_forecast(series_path, target_port, model, order_p, window_n, grid,
                          select, out_dir, resolution);

    auto events = load_probe_events(input, policy_from(syn_policy));

    if (*stats) {
      auto ranking = traffic_by_port(events);
      const bool json = format == "json";
      write_file(fs::path(out_dir) / (json ? "port_ranking.json" : "port_ranking.csv"),
                 json ? port_ranking_json(ranking, top_k)
                      : port_ranking_csv(ranking, top_k));
      write_file(fs::path(out_dir) / "coverage.csv",
                 coverage_csv(cumulative_coverage(ranking)));
      auto probers = top_probers(events, threshold,
                                 rate_span == "active" ? RateSpan::kActive
                                                       : RateSpan::kCapture);
      write_file(fs::path(out_dir) / "top_probers.csv", prober_csv(probers));
      write_file(fs::path(out_dir) / "top_prober_ports.csv",
                 port_ranking_csv(port_profile_of(probers), top_k));
      if (!geodb.empty())
        write_file(fs::path(out_dir) / "country_ranking.csv",
                   country_csv(traffic_by_country(events, GeoDb::load_csv(geodb)),
                               top_k));
      return kExitOk;
    }

    if (*graph) {
      if (per_prober) {
        auto graphs = build_prober_graphs(events, drop_self_loops);
        for (const auto& g : graphs) {
          const std::string name = "prober_" + format_ipv4(g.src_ip);
          if (graph_format == "json")
            write_file(fs::path(out_dir) / (name + ".json"), export_graph_json(g));
          else
            write_file(fs::path(out_dir) / (name + ".dot"), export_graph_dot(g));
        }
        write_file(fs::path(out_dir) / "ports_targeted_cdf.csv",
                   coverage_csv(ports_targeted_cdf(graphs)));
      }
      if (matrix) {
        auto ports =
            traffic_by_port(events).top_ports(static_cast<std::size_t>(ports_top));
        std::vector<std::uint32_t> scope_ips;
        if (scope == "top")
          for (const auto& p : top_probers(events, threshold))
            scope_ips.push_back(p.src_ip);
        auto m = aggregate_transition_matrix(
            events, scope_ips, ports,
            normalize == "global" ? MatrixNorm::kGlobal : MatrixNorm::kRow,
            drop_self_loops);
        write_file(fs::path(out_dir) / ("matrix_" + scope + ".csv"),
                   export_matrix_csv(m));
      }
      return kExitOk;
    }

    if (*series) {
      auto ports =
          traffic_by_port(events).top_ports(static_cast<std::size_t>(series_top));
      if (ports.empty()) throw std::runtime_error("no events to bucketize");
      auto base = bucketize(events, kHour, ports);
      for (const auto& name : resolutions) {
        auto res = parse_resolution(name);
        std::ostringstream out;
        write_series_csv(res == kHour ? base : resample(base, res), out);
        write_file(fs::path(out_dir) / ("series_" + name + ".csv"), out.str());
      }
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
