#include "darknet/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace darknet {
namespace {

std::vector<FeatureScaling> window_scaling(const SeriesTable& m,
                                           std::span<const int> features, int t0,
                                           int t1) {
  std::vector<FeatureScaling> scaling;
  scaling.reserve(features.size());
  for (int j : features) {
    const auto& col = m.columns[static_cast<std::size_t>(j)];
    double sum = 0.0;
    for (int t = t0; t < t1; ++t) sum += col[static_cast<std::size_t>(t)];
    const double n = static_cast<double>(t1 - t0);
    const double mean = sum / n;
    double ss = 0.0;
    for (int t = t0; t < t1; ++t) {
      const double d = col[static_cast<std::size_t>(t)] - mean;
      ss += d * d;
    }
    double std = std::sqrt(ss / n);
    // A flat feature in this window cannot be standardized; leave it raw
    // and let the rank-deficiency flag report the degenerate column.
    if (std <= 0.0) std = 1.0;
    scaling.push_back({mean, std});
  }
  return scaling;
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::VectorXd> make_design_matrix(
    const SeriesTable& m, int target, std::span<const int> features, int p, int t0,
    int t1, std::span<const FeatureScaling> scaling) {
  if (p < 1) throw std::invalid_argument("autoregressive order must be >= 1");
  if (features.empty()) throw std::invalid_argument("no feature series");
  if (t1 > static_cast<int>(m.length()))
    throw std::invalid_argument("design window exceeds series length");
  const int first = std::max(t0, p);  // rows need p lags of history
  const int rows = t1 - first;
  if (rows <= 0) throw std::invalid_argument("window too short to form any row");
  const int cols = 1 + p * static_cast<int>(features.size());

  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd y(rows);
  const auto& target_col = m.columns[static_cast<std::size_t>(target)];
  for (int r = 0; r < rows; ++r) {
    const int t = first + r;
    X(r, 0) = 1.0;
    int c = 1;
    for (std::size_t f = 0; f < features.size(); ++f) {
      const auto& col = m.columns[static_cast<std::size_t>(features[f])];
      const double mean = scaling.empty() ? 0.0 : scaling[f].mean;
      const double std = scaling.empty() ? 1.0 : scaling[f].std;
      for (int h = 1; h <= p; ++h)
        X(r, c++) = (col[static_cast<std::size_t>(t - h)] - mean) / std;
    }
    y(r) = target_col[static_cast<std::size_t>(t)];
  }
  return {std::move(X), std::move(y)};
}

LsqResult fit_least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.rows() < X.cols())
    throw std::invalid_argument("least squares: fewer rows than columns (window too "
                                "short for this order)");
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(X);
  LsqResult result;
  result.weights = cod.solve(y);  // minimum-norm on rank deficiency
  result.rank_deficient = cod.rank() < X.cols();
  return result;
}

double predict_one(const ForecastModel& model, const SeriesTable& m, int t) {
  if (t < model.p || t >= static_cast<int>(m.length()))
    throw std::invalid_argument("predict_one: lag history unavailable at t=" +
                                std::to_string(t));
  double y = model.weights(0);
  int c = 1;
  for (std::size_t f = 0; f < model.features.size(); ++f) {
    const auto& col = m.columns[static_cast<std::size_t>(model.features[f])];
    const auto& s = model.scaling[f];
    for (int h = 1; h <= model.p; ++h)
      y += model.weights(c++) * (col[static_cast<std::size_t>(t - h)] - s.mean) / s.std;
  }
  return y;
}

ForecastModel fit_window(const SeriesTable& m, int target, ModelKind kind,
                         const DesignParams& params, std::span<const int> features,
                         int t, bool scale_features) {
  ForecastModel model;
  model.target = target;
  model.kind = kind;
  model.p = params.p;
  if (kind == ModelKind::kAr) {
    model.features = {target};
    scale_features = false;
  } else {
    model.features.assign(features.begin(), features.end());
    if (model.features.empty()) model.features = {target};
  }
  const int t0 = std::max(t - params.window, 0);
  if (scale_features) {
    model.scaling = window_scaling(m, model.features, t0, t);
  } else {
    model.scaling.assign(model.features.size(), FeatureScaling{});
  }
  auto [X, y] = make_design_matrix(m, target, model.features, params.p, t0, t,
                                   model.scaling);
  auto fit = fit_least_squares(X, y);
  model.weights = std::move(fit.weights);
  model.rank_deficient = fit.rank_deficient;
  return model;
}

EvalReport rolling_forecast(const SeriesTable& m, int target, ModelKind kind,
                            const DesignParams& params, std::span<const int> features,
                            int span_begin, int span_end, bool scale_features,
                            int stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  if (span_begin >= span_end) throw std::invalid_argument("empty evaluation span");
  EvalReport report;
  report.target = target;
  report.resolution_s = m.resolution_s;
  report.params = params;
  report.kind = kind;

  const auto& target_col = m.columns[static_cast<std::size_t>(target)];
  ForecastModel model;
  for (int t = span_begin; t < span_end; ++t) {
    if ((t - span_begin) % stride == 0) {
      try {
        model = fit_window(m, target, kind, params, features, t, scale_features);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("rolling fit at t=" + std::to_string(t) + ": " +
                                    e.what());
      }
      ++report.n_windows;
      report.degenerate = report.degenerate || model.rank_deficient;
    }
    report.predictions.push_back(
        {t, target_col[static_cast<std::size_t>(t)], predict_one(model, m, t)});
  }

  std::vector<double> y_true, y_pred;
  y_true.reserve(report.predictions.size());
  y_pred.reserve(report.predictions.size());
  for (const auto& pr : report.predictions) {
    y_true.push_back(pr.y_true);
    y_pred.push_back(pr.y_pred);
  }
  report.r2 = r_squared(y_true, y_pred);
  return report;
}

double r_squared(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size() || y_true.size() < 2)
    throw std::invalid_argument("r_squared: need equal lengths >= 2");
  double mean = 0.0;
  for (double v : y_true) mean += v;
  mean /= static_cast<double>(y_true.size());
  double ssr = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double r = y_true[i] - y_pred[i];
    const double d = y_true[i] - mean;
    ssr += r * r;
    sst += d * d;
  }
  if (sst == 0.0) {
    // Flat target span: perfect residuals count as a perfect fit, anything
    // else is unscorable. "Perfect" allows rounding at machine precision.
    const double scale = std::max(1.0, mean * mean * static_cast<double>(y_true.size()));
    return ssr <= 1e-20 * scale ? 1.0 : -std::numeric_limits<double>::infinity();
  }
  return 1.0 - ssr / sst;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("pearson: need equal lengths >= 2");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

GridResult grid_search(const SeriesTable& m, int target, ModelKind kind,
                       const GridOptions& opts) {
  const int length = static_cast<int>(m.length());
  const int span_begin = (3 * length) / 4;  // final 25% is the validation span
  const int n_max = (3 * length) / 4;

  GridResult result;
  bool have_best = false;
  std::vector<int> all_features;
  if (kind == ModelKind::kVar)
    for (std::size_t j = 0; j < m.n_series(); ++j)
      all_features.push_back(static_cast<int>(j));

  for (int p = opts.p_min; p <= opts.p_max; ++p) {
    for (int n = 10 * p; n <= n_max; n += opts.n_increment) {
      DesignParams params{p, n};
      EvalReport report;
      try {
        report = rolling_forecast(m, target, kind, params, all_features, span_begin,
                                  length, kind == ModelKind::kVar);
      } catch (const std::invalid_argument&) {
        continue;  // window too short for this cell
      }
      result.cells.push_back({params, report.r2});
      if (!have_best || report.r2 > result.report.r2) {
        result.best = params;
        result.report = std::move(report);
        have_best = true;
      }
    }
  }
  if (!have_best)
    throw std::invalid_argument("grid search: series too short for any grid cell");
  return result;
}

SelectionResult select_features(const SeriesTable& m, int target,
                                const DesignParams& params, int window_start,
                                int k_max) {
  const int window_end = window_start + params.window;
  if (window_start < 0 || window_end > static_cast<int>(m.length()))
    throw std::invalid_argument("feature-selection window out of bounds");
  const int f_end = window_start + (3 * params.window) / 4;  // 75% to F, rest to V

  SelectionResult result;
  const auto& target_col = m.columns[static_cast<std::size_t>(target)];
  const int first = std::max(window_start, params.p);

  // Rank every series (the target's own lags included) by the strongest
  // lagged correlation with the target over F.
  for (std::size_t j = 0; j < m.n_series(); ++j) {
    const auto& col = m.columns[j];
    double best = 0.0;
    bool has_variance = false;
    for (int h = 1; h <= params.p; ++h) {
      std::vector<double> lagged, resp;
      for (int t = first; t < f_end; ++t) {
        lagged.push_back(col[static_cast<std::size_t>(t - h)]);
        resp.push_back(target_col[static_cast<std::size_t>(t)]);
      }
      if (lagged.size() < 2) continue;
      const double lo = *std::min_element(lagged.begin(), lagged.end());
      const double hi = *std::max_element(lagged.begin(), lagged.end());
      if (hi > lo) has_variance = true;
      best = std::max(best, std::abs(pearson(resp, lagged)));
    }
    if (has_variance) result.ranking.emplace_back(static_cast<int>(j), best);
  }
  if (result.ranking.empty()) {
    result.features = {target};
    result.k = 1;
    result.ar_fallback = true;
    return result;
  }
  std::sort(result.ranking.begin(), result.ranking.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });

  // Grow the candidate set and keep the k with the best validation R^2.
  const int limit = std::min<int>(k_max, static_cast<int>(result.ranking.size()));
  double best_r2 = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= limit; ++k) {
    std::vector<int> candidate;
    candidate.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) candidate.push_back(result.ranking[static_cast<std::size_t>(i)].first);

    auto scaling = window_scaling(m, candidate, window_start, f_end);
    ForecastModel model;
    model.target = target;
    model.kind = ModelKind::kVar;
    model.p = params.p;
    model.features = candidate;
    model.scaling = std::move(scaling);
    try {
      auto [X, y] = make_design_matrix(m, target, candidate, params.p, window_start,
                                       f_end, model.scaling);
      auto fit = fit_least_squares(X, y);
      model.weights = std::move(fit.weights);
    } catch (const std::invalid_argument&) {
      break;  // F too short for this many regressors
    }

    std::vector<double> y_true, y_pred;
    for (int t = f_end; t < window_end; ++t) {
      y_true.push_back(target_col[static_cast<std::size_t>(t)]);
      y_pred.push_back(predict_one(model, m, t));
    }
    if (y_true.size() < 2) break;
    const double r2 = r_squared(y_true, y_pred);
    if (r2 > best_r2) {
      best_r2 = r2;
      result.features = candidate;
      result.k = k;
    }
  }
  if (result.features.empty()) {
    result.features = {target};
    result.k = 1;
    result.ar_fallback = true;
  }
  return result;
}

std::string model_kind_name(ModelKind kind) {
  return kind == ModelKind::kAr ? "ar" : "var";
}

}  // namespace darknet
