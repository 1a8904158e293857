#include "darknet/reports.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace darknet {
namespace {

std::size_t cutoff(std::size_t size, int top_k) {
  return top_k < 0 ? size : std::min(size, static_cast<std::size_t>(top_k));
}

void append_share(std::ostringstream& out, double share) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9f", share);
  out << buf;
}

}  // namespace

std::string port_ranking_csv(const PortRanking& ranking, int top_k) {
  std::ostringstream out;
  out << "port,count,share\n";
  for (std::size_t i = 0; i < cutoff(ranking.entries.size(), top_k); ++i) {
    const auto& e = ranking.entries[i];
    out << e.port << ',' << e.count << ',';
    append_share(out, e.share);
    out << '\n';
  }
  return out.str();
}

std::string port_ranking_json(const PortRanking& ranking, int top_k) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i = 0; i < cutoff(ranking.entries.size(), top_k); ++i) {
    const auto& e = ranking.entries[i];
    j.push_back({{"port", e.port}, {"count", e.count}, {"share", e.share}});
  }
  return j.dump(2);
}

std::string coverage_csv(const CoverageCurve& curve) {
  std::ostringstream out;
  out << "n_ports,cumulative_share\n";
  for (const auto& pt : curve.points) {
    out << pt.n_ports << ',';
    append_share(out, pt.cumulative_share);
    out << '\n';
  }
  return out.str();
}

std::string prober_csv(const std::vector<ProberProfile>& probers) {
  std::ostringstream out;
  out << "src_ip,total_syn,active_span_days,mean_daily_rate\n";
  for (const auto& p : probers) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f,%.4f", p.active_span_days, p.mean_daily_rate);
    out << format_ipv4(p.src_ip) << ',' << p.total_syn << ',' << buf << '\n';
  }
  return out.str();
}

std::string country_csv(const std::vector<CountryEntry>& entries, int top_k) {
  std::ostringstream out;
  out << "country,count,share\n";
  for (std::size_t i = 0; i < cutoff(entries.size(), top_k); ++i) {
    out << entries[i].country << ',' << entries[i].count << ',';
    append_share(out, entries[i].share);
    out << '\n';
  }
  return out.str();
}

std::string eval_report_json(const EvalReport& report) {
  nlohmann::json j;
  j["target_index"] = report.target;
  j["resolution_s"] = report.resolution_s;
  j["model"] = model_kind_name(report.kind);
  j["p"] = report.params.p;
  j["window"] = report.params.window;
  j["r2"] = report.r2;
  j["n_windows"] = report.n_windows;
  j["degenerate"] = report.degenerate;
  return j.dump(2);
}

std::string predictions_csv(const EvalReport& report, std::int64_t origin_s) {
  std::ostringstream out;
  out << "bucket_start,y_true,y_pred\n";
  for (const auto& pr : report.predictions) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%lld,%.9g,%.9g\n",
                  static_cast<long long>(origin_s + pr.t * report.resolution_s),
                  pr.y_true, pr.y_pred);
    out << buf;
  }
  return out.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "port,resolution,p_star,n_star,r2_ar,r2_var\n";
  for (const auto& row : rows) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f", row.r2_ar, row.r2_var);
    out << row.port << ',' << row.resolution << ',' << row.p_star << ',' << row.n_star
        << ',' << buf << '\n';
  }
  return out.str();
}

}  // namespace darknet
