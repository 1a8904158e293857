#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "darknet/timeseries.hpp"

namespace darknet {

struct DesignParams {
  int p = 1;       // autoregressive order
  int window = 10; // rolling-window length N, in buckets
};

enum class ModelKind { kAr, kVar };

struct FeatureScaling {
  double mean = 0.0;
  double std = 1.0;
};

// Fitted weights for one rolling-window position. The weight vector is
// [w0, then for each feature j in order, lags 1..p].
struct ForecastModel {
  int target = 0;
  ModelKind kind = ModelKind::kAr;
  int p = 1;
  std::vector<int> features;  // series indexes; {target} for AR
  Eigen::VectorXd weights;
  std::vector<FeatureScaling> scaling;  // per feature, identity for AR
  bool rank_deficient = false;
};

struct Prediction {
  int t;
  double y_true;
  double y_pred;
};

struct EvalReport {
  int target = 0;
  std::int64_t resolution_s = 0;
  DesignParams params;
  ModelKind kind = ModelKind::kAr;
  std::vector<Prediction> predictions;
  double r2 = 0.0;
  int n_windows = 0;
  bool degenerate = false;  // some window hit rank deficiency
};

// One row per t in [t0, t1): leading 1, then scaled x_j(t-h) for each
// feature j and lag h in 1..p; y(t) is the raw target. Rows needing lags
// before index 0 are excluded; throws if no row remains.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> make_design_matrix(
    const SeriesTable& m, int target, std::span<const int> features, int p,
    int t0, int t1, std::span<const FeatureScaling> scaling = {});

struct LsqResult {
  Eigen::VectorXd weights;
  bool rank_deficient = false;
};

// Minimizes ||XW - y||; orthogonal factorization, minimum-norm on rank
// deficiency. Throws if rows < columns.
LsqResult fit_least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

// Evaluates the model at t in raw response units. Throws if lags t-1..t-p
// are unavailable.
double predict_one(const ForecastModel& model, const SeriesTable& m, int t);

// Fits one window [t-N, t) and returns the model (used by rolling_forecast
// and feature selection).
ForecastModel fit_window(const SeriesTable& m, int target, ModelKind kind,
                         const DesignParams& params, std::span<const int> features,
                         int t, bool scale_features);

// Refits at every step: for each t in [span_begin, span_end), fit on
// [t-N, t), predict t, record the pair; R^2 over the span.
EvalReport rolling_forecast(const SeriesTable& m, int target, ModelKind kind,
                            const DesignParams& params, std::span<const int> features,
                            int span_begin, int span_end,
                            bool scale_features = false, int stride = 1);

// 1 - SSR/SST; zero-variance y_true gives 1 when residuals are all zero,
// -inf otherwise.
double r_squared(std::span<const double> y_true, std::span<const double> y_pred);

// Sample Pearson correlation; 0 when either input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct GridOptions {
  int p_min = 1;
  int p_max = 10;
  int n_increment = 10;
};

struct GridCell {
  DesignParams params;
  double r2;
};

struct GridResult {
  DesignParams best;
  EvalReport report;
  std::vector<GridCell> cells;
};

// Exhaustive search over p in [p_min, p_max] and N in {10p, 10p+10, ...,
// floor(0.75 L)}; validation span is the chronologically last 25%. Ties go
// to smaller p, then smaller N.
GridResult grid_search(const SeriesTable& m, int target, ModelKind kind,
                       const GridOptions& opts = {});

struct SelectionResult {
  std::vector<int> features;  // I_k*, ordered by |pearson| descending
  int k = 0;
  bool ar_fallback = false;
  std::vector<std::pair<int, double>> ranking;  // (series index, |pearson|)
};

// Splits the window at `window_start` 75/25 into F and V, ranks candidate
// series by |pearson| against the target on F (max over lags 1..p), then
// grows the feature set greedily, keeping the k with the best R^2 on V.
SelectionResult select_features(const SeriesTable& m, int target,
                                const DesignParams& params, int window_start,
                                int k_max = 30);

std::string model_kind_name(ModelKind kind);

}  // namespace darknet
