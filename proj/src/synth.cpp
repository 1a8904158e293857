#include "darknet/synth.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace darknet {

bool is_stationary(const std::vector<double>& coefficients) {
  if (coefficients.size() < 2) return true;  // intercept only
  const int p = static_cast<int>(coefficients.size()) - 1;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (int h = 0; h < p; ++h) companion(0, h) = coefficients[static_cast<std::size_t>(h) + 1];
  for (int i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  const auto eigenvalues = companion.eigenvalues();
  double radius = 0.0;
  for (int i = 0; i < eigenvalues.size(); ++i)
    radius = std::max(radius, std::abs(eigenvalues(i)));
  return radius < 1.0;
}

std::vector<double> gen_ar(const ArSpec& spec) {
  if (spec.coefficients.size() < 2)
    throw std::invalid_argument("gen_ar: need [w0, w1..wp]");
  if (!is_stationary(spec.coefficients))
    throw std::invalid_argument("gen_ar: non-stationary coefficients");
  for (const auto& sw : spec.regime_switches)
    if (sw.coefficients.size() != spec.coefficients.size() ||
        !is_stationary(sw.coefficients))
      throw std::invalid_argument("gen_ar: bad regime switch coefficients");

  const std::size_t p = spec.coefficients.size() - 1;
  const std::size_t burn_in = 10 * p;
  Rng rng(spec.seed);

  std::vector<const std::vector<double>*> active(spec.length, &spec.coefficients);
  for (const auto& sw : spec.regime_switches)
    for (std::size_t t = sw.t; t < spec.length; ++t) active[t] = &sw.coefficients;

  std::vector<double> history(p, 0.0);  // most recent last
  std::vector<double> out;
  out.reserve(spec.length);
  for (std::size_t t = 0; t < burn_in + spec.length; ++t) {
    const auto& w = t < burn_in ? spec.coefficients : *active[t - burn_in];
    double x = w[0];
    for (std::size_t h = 1; h <= p; ++h) x += w[h] * history[p - h];
    if (spec.innovation_std > 0.0) x += spec.innovation_std * rng.normal();
    if (p > 0) {
      history.erase(history.begin());
      history.push_back(x);
    }
    if (t >= burn_in) out.push_back(x);
  }
  return out;
}

std::vector<std::vector<double>> gen_var(const VarSpec& spec) {
  const std::size_t k = spec.n_series;
  if (k == 0 || spec.intercepts.size() != k || spec.innovation_stds.size() != k ||
      spec.coefficients.size() != static_cast<std::size_t>(spec.p))
    throw std::invalid_argument("gen_var: inconsistent spec");
  const std::size_t burn_in = 10 * static_cast<std::size_t>(spec.p);
  Rng rng(spec.seed);

  std::vector<std::vector<double>> history(
      static_cast<std::size_t>(spec.p), std::vector<double>(k, 0.0));  // recent last
  std::vector<std::vector<double>> out(k);
  for (auto& col : out) col.reserve(spec.length);

  for (std::size_t t = 0; t < burn_in + spec.length; ++t) {
    std::vector<double> x(k);
    for (std::size_t i = 0; i < k; ++i) {
      double v = spec.intercepts[i];
      for (int h = 1; h <= spec.p; ++h) {
        const auto& lag = history[history.size() - static_cast<std::size_t>(h)];
        const auto& coeff = spec.coefficients[static_cast<std::size_t>(h) - 1];
        for (std::size_t j = 0; j < k; ++j) v += coeff[i][j] * lag[j];
      }
      if (spec.innovation_stds[i] > 0.0) v += spec.innovation_stds[i] * rng.normal();
      x[i] = v;
    }
    history.erase(history.begin());
    history.push_back(x);
    if (t >= burn_in)
      for (std::size_t i = 0; i < k; ++i) out[i].push_back(x[i]);
  }
  return out;
}

std::vector<ProbeEvent> gen_markov_prober(const MarkovProberSpec& spec) {
  const std::size_t k = spec.ports.size();
  if (k == 0 || spec.transition.size() != k)
    throw std::invalid_argument("gen_markov_prober: matrix/port size mismatch");
  for (const auto& row : spec.transition) {
    if (row.size() != k)
      throw std::invalid_argument("gen_markov_prober: ragged transition matrix");
    double sum = 0.0;
    for (double v : row) {
      if (v < 0.0) throw std::invalid_argument("gen_markov_prober: negative probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("gen_markov_prober: row not stochastic");
  }

  Rng rng(spec.seed);
  std::vector<ProbeEvent> events;
  events.reserve(spec.n_events);
  std::size_t state = 0;
  double t = spec.t_start;
  for (std::size_t n = 0; n < spec.n_events; ++n) {
    events.push_back({t, spec.src_ip, spec.ports[state]});
    t += spec.dt;
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t next = k - 1;
    for (std::size_t j = 0; j < k; ++j) {
      acc += spec.transition[state][j];
      if (u < acc) {
        next = j;
        break;
      }
    }
    state = next;
  }
  return events;
}

std::vector<double> zipf_weights(std::size_t n, double exponent) {
  std::vector<double> weights(n);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    weights[r] = std::pow(static_cast<double>(r + 1), -exponent);
    total += weights[r];
  }
  for (auto& w : weights) w /= total;
  return weights;
}

std::vector<ProbeEvent> gen_zipf_traffic(const ZipfTrafficSpec& spec) {
  if (spec.ports.empty()) throw std::invalid_argument("gen_zipf_traffic: no ports");
  if (spec.exponent <= 0.0)
    throw std::invalid_argument("gen_zipf_traffic: exponent must be > 0");
  auto weights = zipf_weights(spec.ports.size(), spec.exponent);
  std::vector<double> cdf(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  Rng rng(spec.seed);
  std::vector<ProbeEvent> events;
  events.reserve(spec.n_events);
  const double span = spec.t_end - spec.t_start;
  for (std::size_t n = 0; n < spec.n_events; ++n) {
    const double u = rng.uniform();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const std::size_t rank = static_cast<std::size_t>(it - cdf.begin());
    const double t = spec.t_start + span * rng.uniform();
    const std::uint32_t src =
        spec.source_base + static_cast<std::uint32_t>(n % spec.n_sources);
    events.push_back({t, src, spec.ports[rank]});
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const ProbeEvent& a, const ProbeEvent& b) {
                     return a.timestamp < b.timestamp;
                   });
  return events;
}

}  // namespace darknet
