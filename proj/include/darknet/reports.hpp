#pragma once

#include <string>

#include "darknet/analytics.hpp"
#include "darknet/forecast.hpp"

namespace darknet {

std::string port_ranking_csv(const PortRanking& ranking, int top_k = -1);
std::string port_ranking_json(const PortRanking& ranking, int top_k = -1);

std::string coverage_csv(const CoverageCurve& curve);

std::string prober_csv(const std::vector<ProberProfile>& probers);

std::string country_csv(const std::vector<CountryEntry>& entries, int top_k = -1);

std::string eval_report_json(const EvalReport& report);
std::string predictions_csv(const EvalReport& report, std::int64_t origin_s);

struct SummaryRow {
  std::uint16_t port;
  std::string resolution;
  int p_star;
  int n_star;
  double r2_ar;
  double r2_var;
};

std::string summary_csv(const std::vector<SummaryRow>& rows);

}  // namespace darknet
