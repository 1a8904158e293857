#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "darknet/analytics.hpp"
#include "darknet/forecast.hpp"
#include "darknet/graphs.hpp"
#include "darknet/pipeline.hpp"
#include "darknet/reports.hpp"
#include "darknet/timeseries.hpp"
#include "json.hpp"

namespace darknet {
namespace {

namespace fs = std::filesystem;

struct StageContext {
  const RunConfig& config;
  fs::path out;
  PipelineResult& result;

  void write(const std::string& name, const std::string& content) {
    std::ofstream file(out / name, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + (out / name).string());
    file << content;
    result.artifacts.push_back(name);
  }
};

bool stage_enabled(const RunConfig& config, const std::string& name) {
  return std::find(config.stages.begin(), config.stages.end(), name) !=
         config.stages.end();
}

void run_stats(StageContext& ctx, const std::vector<ProbeEvent>& events) {
  const auto& cfg = ctx.config;
  auto ranking = traffic_by_port(events);
  ctx.write("port_ranking.csv", port_ranking_csv(ranking, cfg.top_k));
  ctx.write("port_ranking_full.csv", port_ranking_csv(ranking));
  ctx.write("coverage.csv", coverage_csv(cumulative_coverage(ranking)));

  const auto span_mode =
      cfg.rate_span == "active" ? RateSpan::kActive : RateSpan::kCapture;
  auto probers = top_probers(events, cfg.prober_threshold, span_mode);
  ctx.write("top_probers.csv", prober_csv(probers));
  ctx.write("top_prober_ports.csv",
            port_ranking_csv(port_profile_of(probers), cfg.top_k));

  if (!cfg.geodb.empty()) {
    auto db = GeoDb::load_csv(cfg.geodb);
    ctx.write("country_ranking.csv",
              country_csv(traffic_by_country(events, db), cfg.top_k));
  }
}

void run_graphs(StageContext& ctx, const std::vector<ProbeEvent>& events) {
  const auto& cfg = ctx.config;
  auto graphs = build_prober_graphs(events, cfg.drop_self_loops);
  ctx.write("ports_targeted_cdf.csv", coverage_csv(ports_targeted_cdf(graphs)));

  // Fig. 5-style per-prober graphs for the busiest probers.
  std::vector<const TransitionGraph*> by_traffic;
  for (const auto& g : graphs) by_traffic.push_back(&g);
  std::sort(by_traffic.begin(), by_traffic.end(),
            [](const TransitionGraph* a, const TransitionGraph* b) {
              std::uint64_t ta = 0, tb = 0;
              for (const auto& [_, n] : a->nodes) ta += n;
              for (const auto& [_, n] : b->nodes) tb += n;
              if (ta != tb) return ta > tb;
              return a->src_ip < b->src_ip;
            });
  for (std::size_t i = 0; i < by_traffic.size() && i < 10; ++i) {
    const auto& g = *by_traffic[i];
    ctx.write("prober_" + format_ipv4(g.src_ip) + ".dot", export_graph_dot(g));
  }

  const auto norm =
      cfg.normalize == "global" ? MatrixNorm::kGlobal : MatrixNorm::kRow;
  auto ports = traffic_by_port(events).top_ports(
      static_cast<std::size_t>(cfg.matrix_ports_top));
  if (!ports.empty()) {
    ctx.write("matrix_all.csv",
              export_matrix_csv(aggregate_transition_matrix(
                  events, {}, ports, norm, cfg.drop_self_loops)));
    const auto span_mode =
        cfg.rate_span == "active" ? RateSpan::kActive : RateSpan::kCapture;
    auto probers = top_probers(events, cfg.prober_threshold, span_mode);
    std::vector<std::uint32_t> scope;
    for (const auto& p : probers) scope.push_back(p.src_ip);
    if (!scope.empty())
      ctx.write("matrix_top.csv",
                export_matrix_csv(aggregate_transition_matrix(
                    events, scope, ports, norm, cfg.drop_self_loops)));
    else
      ctx.result.warnings.push_back("graphs: no top probers, matrix_top skipped");
  } else {
    ctx.result.warnings.push_back("graphs: no events, matrices skipped");
  }
}

RateMatrix run_series(StageContext& ctx, const std::vector<ProbeEvent>& events) {
  const auto& cfg = ctx.config;
  auto ports =
      traffic_by_port(events).top_ports(static_cast<std::size_t>(cfg.series_ports_top));
  if (ports.empty()) {
    ctx.result.warnings.push_back("series: no events, series skipped");
    return {};
  }
  auto base = bucketize(events, kHour, ports);
  for (const auto& name : cfg.resolutions) {
    auto res = parse_resolution(name);
    std::ostringstream out;
    write_series_csv(res == kHour ? base : resample(base, res), out);
    ctx.write("series_" + name + ".csv", out.str());
  }
  return base;
}

void run_forecast(StageContext& ctx, const RateMatrix& base) {
  const auto& cfg = ctx.config;
  if (base.ports.empty()) {
    ctx.result.warnings.push_back("forecast: no series available, skipped");
    return;
  }
  const auto res = parse_resolution(cfg.forecast_resolution);
  auto table = to_series_table(res == kHour ? base : resample(base, res));

  std::vector<int> targets;
  if (cfg.forecast_targets.empty()) {
    targets.push_back(0);
  } else {
    for (int port : cfg.forecast_targets) {
      int idx = table.index_of_port(static_cast<std::uint16_t>(port));
      if (idx < 0)
        ctx.result.warnings.push_back("forecast: port " + std::to_string(port) +
                                      " not in series scope, skipped");
      else
        targets.push_back(idx);
    }
  }

  GridOptions grid{cfg.grid_p_min, cfg.grid_p_max, cfg.grid_increment};
  std::vector<SummaryRow> summary;
  std::ostringstream comparison;
  comparison << "port,resolution,r2_ar,r2_var\n";
  for (int target : targets) {
    const auto port = table.ports[static_cast<std::size_t>(target)];
    auto ar = grid_search(table, target, ModelKind::kAr, grid);

    const int length = static_cast<int>(table.length());
    const int span_begin = (3 * length) / 4;
    EvalReport var_report;
    if (cfg.select_features_enabled) {
      auto selection = select_features(table, target, ar.best,
                                       std::max(span_begin - ar.best.window, ar.best.p));
      var_report = rolling_forecast(table, target, ModelKind::kVar, ar.best,
                                    selection.features, span_begin, length, true);
    } else {
      std::vector<int> all;
      for (std::size_t j = 0; j < table.n_series(); ++j) all.push_back(static_cast<int>(j));
      var_report = rolling_forecast(table, target, ModelKind::kVar, ar.best, all,
                                    span_begin, length, true);
    }

    const std::string tag = "port_" + std::to_string(port);
    ctx.write("forecast_" + tag + "_ar.json", eval_report_json(ar.report));
    ctx.write("forecast_" + tag + "_ar.csv",
              predictions_csv(ar.report, table.origin_s));
    ctx.write("forecast_" + tag + "_var.json", eval_report_json(var_report));
    ctx.write("forecast_" + tag + "_var.csv",
              predictions_csv(var_report, table.origin_s));
    summary.push_back({port, cfg.forecast_resolution, ar.best.p, ar.best.window,
                       ar.report.r2, var_report.r2});
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%u,%s,%.6f,%.6f\n", port,
                  cfg.forecast_resolution.c_str(), ar.report.r2, var_report.r2);
    comparison << buf;
  }
  ctx.write("summary.csv", summary_csv(summary));
  ctx.write("ar_vs_var.csv", comparison.str());
}

void write_manifest(StageContext& ctx) {
  nlohmann::json j;
  j["complete"] = ctx.result.complete;
  j["warnings"] = ctx.result.warnings;
  auto& artifacts = j["artifacts"] = nlohmann::json::object();
  std::sort(ctx.result.artifacts.begin(), ctx.result.artifacts.end());
  for (const auto& name : ctx.result.artifacts) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64_file((ctx.out / name).string())));
    artifacts[name] = buf;
  }
  std::ofstream file(ctx.out / "manifest.json", std::ios::binary);
  file << j.dump(2);
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config) {
  PipelineResult result;
  fs::create_directories(config.out_dir);
  StageContext ctx{config, fs::path(config.out_dir), result};

  auto events = load_probe_events(config.input, config.syn_policy);
  if (events.empty()) result.warnings.push_back("no events after SYN filtering");

  std::string failed_stage;
  try {
    if (stage_enabled(config, "stats")) {
      failed_stage = "stats";
      run_stats(ctx, events);
    }
    if (stage_enabled(config, "graphs")) {
      failed_stage = "graphs";
      run_graphs(ctx, events);
    }
    RateMatrix base;
    if (stage_enabled(config, "series") || stage_enabled(config, "forecast")) {
      failed_stage = "series";
      base = run_series(ctx, events);
    }
    if (stage_enabled(config, "forecast") && !events.empty()) {
      failed_stage = "forecast";
      run_forecast(ctx, base);
    }
  } catch (const std::exception& e) {
    result.complete = false;
    result.warnings.push_back(failed_stage + ": " + e.what());
    write_manifest(ctx);
    throw std::runtime_error("stage '" + failed_stage + "' failed: " + e.what());
  }
  write_manifest(ctx);
  return result;
}

}  // namespace darknet
