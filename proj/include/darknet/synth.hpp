#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "darknet/rng.hpp"
#include "darknet/types.hpp"

namespace darknet {

struct RegimeSwitch {
  std::size_t t;                    // post-burn-in index of first affected sample
  std::vector<double> coefficients; // new [w0, w1..wp]
};

// AR(p) generator spec: coefficients are [w0, w1..wp]. Each regime must be
// stationary (companion-matrix spectral radius < 1), checked up front.
struct ArSpec {
  std::uint64_t seed = 1;
  std::vector<double> coefficients;
  double innovation_std = 1.0;
  std::size_t length = 0;
  std::vector<RegimeSwitch> regime_switches;
};

// VAR generator: K coupled series. coefficients[h-1] is the K x K lag-h
// matrix; intercepts and innovation stds are per series.
struct VarSpec {
  std::uint64_t seed = 1;
  std::size_t n_series = 0;
  int p = 1;
  std::vector<double> intercepts;
  std::vector<std::vector<std::vector<double>>> coefficients;  // [lag][i][j]
  std::vector<double> innovation_stds;
  std::size_t length = 0;
};

struct MarkovProberSpec {
  std::uint64_t seed = 1;
  std::uint32_t src_ip = 0;
  std::vector<std::uint16_t> ports;
  std::vector<std::vector<double>> transition;  // row-stochastic
  std::size_t n_events = 0;
  double t_start = 0.0;
  double dt = 1.0;  // fixed inter-event gap; timestamps strictly increase
};

struct ZipfTrafficSpec {
  std::uint64_t seed = 1;
  std::vector<std::uint16_t> ports;  // rank order; weight of rank r is r^-s
  double exponent = 1.0;
  std::size_t n_events = 0;
  double t_start = 0.0;
  double t_end = 1.0;
  std::uint32_t n_sources = 1;
  std::uint32_t source_base = 0x0A000001;  // 10.0.0.1
};

// Eq-style AR recursion with 10p burn-in samples discarded. Throws on
// non-stationary coefficients.
std::vector<double> gen_ar(const ArSpec& spec);

std::vector<std::vector<double>> gen_var(const VarSpec& spec);

std::vector<ProbeEvent> gen_markov_prober(const MarkovProberSpec& spec);

// dst_ports Zipf-ranked over spec.ports; timestamps uniform over the span,
// sorted ascending. Sources round-robin over n_sources addresses.
std::vector<ProbeEvent> gen_zipf_traffic(const ZipfTrafficSpec& spec);

std::vector<double> zipf_weights(std::size_t n, double exponent);

bool is_stationary(const std::vector<double>& coefficients);  // [w0, w1..wp]

}  // namespace darknet
