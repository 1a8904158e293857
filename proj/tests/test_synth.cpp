#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "darknet/rng.hpp"
#include "darknet/synth.hpp"

using namespace darknet;

TEST_CASE("inverse normal CDF hits known quantiles") {
  CHECK(Rng::inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(Rng::inverse_normal_cdf(0.975) == doctest::Approx(1.959964).epsilon(1e-5));
  CHECK(Rng::inverse_normal_cdf(0.025) == doctest::Approx(-1.959964).epsilon(1e-5));
  CHECK(Rng::inverse_normal_cdf(0.8413447460685429) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rng streams are reproducible and seed-dependent") {
  Rng a(5), b(5), c(6);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  bool differs = false;
  Rng a2(5);
  for (int i = 0; i < 100; ++i)
    if (a2.next_u64() != c.next_u64()) differs = true;
  CHECK(differs);
}

TEST_CASE("normal sample moments") {
  Rng rng(1234);
  const int n = 200000;
  double sum = 0, ss = 0;
  for (int i = 0; i < n; ++i) {
    double v = rng.normal();
    sum += v;
    ss += v * v;
  }
  const double mean = sum / n;
  const double var = ss / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("stationarity validation") {
  CHECK(is_stationary({0.0, 0.5}));
  CHECK(is_stationary({0.0, 0.5, -0.3}));
  CHECK_FALSE(is_stationary({0.0, 1.0}));
  CHECK_FALSE(is_stationary({0.0, 0.9, 0.2}));
  ArSpec bad;
  bad.coefficients = {0.0, 1.1};
  bad.length = 10;
  CHECK_THROWS_AS(gen_ar(bad), std::invalid_argument);
}

TEST_CASE("zero-innovation AR settles at its fixed point") {
  ArSpec spec;
  spec.coefficients = {3.0, 0.0};
  spec.innovation_std = 0.0;
  spec.length = 20;
  for (double v : gen_ar(spec)) CHECK(v == doctest::Approx(3.0));
}

TEST_CASE("identical spec and seed give bit-identical output") {
  ArSpec spec;
  spec.seed = 99;
  spec.coefficients = {0.1, 0.6};
  spec.innovation_std = 1.0;
  spec.length = 500;
  CHECK(gen_ar(spec) == gen_ar(spec));
}

TEST_CASE("AR(1) lag-1 autocorrelation approaches phi") {
  ArSpec spec;
  spec.seed = 404;
  spec.coefficients = {0.0, 0.5};
  spec.innovation_std = 1.0;
  spec.length = 100000;
  auto x = gen_ar(spec);
  double mean = 0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - mean) * (x[i] - mean);
    if (i + 1 < x.size()) num += (x[i] - mean) * (x[i + 1] - mean);
  }
  CHECK(num / den == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("regime switch changes the variance as expected") {
  ArSpec spec;
  spec.seed = 7070;
  spec.coefficients = {0.0, 0.9};
  spec.innovation_std = 1.0;
  spec.length = 40000;
  spec.regime_switches = {{20000, {0.0, 0.1}}};
  auto x = gen_ar(spec);
  auto variance = [&](std::size_t lo, std::size_t hi) {
    double m = 0;
    for (std::size_t i = lo; i < hi; ++i) m += x[i];
    m /= static_cast<double>(hi - lo);
    double s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += (x[i] - m) * (x[i] - m);
    return s / static_cast<double>(hi - lo);
  };
  // Theoretical variances: 1/(1-0.81) = 5.26 and 1/(1-0.01) = 1.01.
  CHECK(variance(2000, 20000) == doctest::Approx(5.26).epsilon(0.15));
  CHECK(variance(22000, 40000) == doctest::Approx(1.01).epsilon(0.15));
}

TEST_CASE("gen_var couples series through the coefficient matrix") {
  VarSpec spec;
  spec.seed = 11;
  spec.n_series = 2;
  spec.p = 1;
  spec.intercepts = {0.0, 0.0};
  spec.coefficients = {{{0.1, 0.8}, {0.0, 0.5}}};
  spec.innovation_stds = {0.1, 1.0};
  spec.length = 20000;
  auto cols = gen_var(spec);
  // x(t) = 0.1 x(t-1) + 0.8 z(t-1) + e: correlation with lagged z is strong.
  double mx = 0, mz = 0;
  for (std::size_t t = 1; t < spec.length; ++t) {
    mx += cols[0][t];
    mz += cols[1][t - 1];
  }
  mx /= static_cast<double>(spec.length - 1);
  mz /= static_cast<double>(spec.length - 1);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t t = 1; t < spec.length; ++t) {
    const double dx = cols[0][t] - mx;
    const double dz = cols[1][t - 1] - mz;
    sxy += dx * dz;
    sxx += dx * dx;
    syy += dz * dz;
  }
  CHECK(sxy / std::sqrt(sxx * syy) > 0.9);
}

TEST_CASE("identity transition matrix pins the prober to one port") {
  MarkovProberSpec spec;
  spec.ports = {23, 80};
  spec.transition = {{1.0, 0.0}, {0.0, 1.0}};
  spec.n_events = 100;
  auto events = gen_markov_prober(spec);
  for (const auto& e : events) CHECK(e.dst_port == 23);
}

TEST_CASE("deterministic 2-port chain alternates strictly") {
  MarkovProberSpec spec;
  spec.ports = {1, 2};
  spec.transition = {{0.0, 1.0}, {1.0, 0.0}};
  spec.n_events = 50;
  auto events = gen_markov_prober(spec);
  for (std::size_t i = 0; i < events.size(); ++i)
    CHECK(events[i].dst_port == (i % 2 == 0 ? 1 : 2));
  for (std::size_t i = 1; i < events.size(); ++i)
    CHECK(events[i].timestamp > events[i - 1].timestamp);
}

TEST_CASE("invalid transition matrices are rejected") {
  MarkovProberSpec spec;
  spec.ports = {1, 2};
  spec.n_events = 10;
  spec.transition = {{0.5, 0.4}, {1.0, 0.0}};  // row sums to 0.9
  CHECK_THROWS_AS(gen_markov_prober(spec), std::invalid_argument);
  spec.transition = {{1.5, -0.5}, {1.0, 0.0}};
  CHECK_THROWS_AS(gen_markov_prober(spec), std::invalid_argument);
}

TEST_CASE("single-port zipf list puts all traffic on that port") {
  ZipfTrafficSpec spec;
  spec.ports = {4242};
  spec.n_events = 200;
  spec.t_start = 0.0;
  spec.t_end = 100.0;
  for (const auto& e : gen_zipf_traffic(spec)) CHECK(e.dst_port == 4242);
}

TEST_CASE("large exponent concentrates traffic on rank 1") {
  ZipfTrafficSpec spec;
  spec.seed = 5;
  spec.ports = {10, 20, 30};
  spec.exponent = 30.0;
  spec.n_events = 1000;
  spec.t_start = 0.0;
  spec.t_end = 10.0;
  std::size_t top = 0;
  for (const auto& e : gen_zipf_traffic(spec))
    if (e.dst_port == 10) ++top;
  CHECK(static_cast<double>(top) / 1000.0 > 0.999);
}

TEST_CASE("empirical zipf shares match analytic weights") {
  ZipfTrafficSpec spec;
  spec.seed = 6;
  for (int p = 1; p <= 2000; ++p) spec.ports.push_back(static_cast<std::uint16_t>(p));
  spec.exponent = 1.2;
  spec.n_events = 1000000;
  spec.t_start = 0.0;
  spec.t_end = 86400.0;
  auto events = gen_zipf_traffic(spec);
  std::vector<std::size_t> counts(2001, 0);
  for (const auto& e : events) ++counts[e.dst_port];
  auto weights = zipf_weights(2000, 1.2);
  for (std::size_t r = 0; r < 20; ++r) {
    const double share = static_cast<double>(counts[r + 1]) / 1e6;
    CHECK(std::abs(share - weights[r]) < 0.01);
  }
}

TEST_CASE("zipf timestamps are sorted within the configured span") {
  ZipfTrafficSpec spec;
  spec.seed = 8;
  spec.ports = {1, 2, 3};
  spec.n_events = 500;
  spec.t_start = 100.0;
  spec.t_end = 200.0;
  auto events = gen_zipf_traffic(spec);
  for (std::size_t i = 0; i < events.size(); ++i) {
    CHECK(events[i].timestamp >= 100.0);
    CHECK(events[i].timestamp < 200.0);
    if (i > 0) CHECK(events[i].timestamp >= events[i - 1].timestamp);
  }
}
