#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "darknet/analytics.hpp"
#include "darknet/types.hpp"

namespace darknet {

using PortPair = std::pair<std::uint16_t, std::uint16_t>;

// Per-prober directed port-transition graph. Edge probabilities are
// row-stochastic: outgoing edges of every port sum to 1.
struct TransitionGraph {
  std::uint32_t src_ip = 0;
  std::map<std::uint16_t, std::uint64_t> nodes;   // port -> hit count
  std::map<PortPair, std::uint64_t> counts;       // raw transition counts
  std::map<PortPair, double> edges;               // transition probabilities
};

enum class MatrixNorm { kRow, kGlobal };
enum class ProberScope { kAll, kTop };

struct TransitionMatrix {
  std::vector<std::uint16_t> ports;
  std::vector<std::vector<std::uint64_t>> counts;  // K x K
  std::vector<std::vector<double>> probs;          // K x K
};

// Events must all share one src_ip and be time-ordered (ties by input
// order). Fewer than 2 events gives a graph with nodes but no edges.
TransitionGraph build_transition_graph(std::span<const ProbeEvent> events,
                                       bool drop_self_loops = false);

// Groups a mixed event stream by src_ip (stable-sorting each prober's
// events by timestamp) and builds one graph per prober.
std::vector<TransitionGraph> build_prober_graphs(std::span<const ProbeEvent> events,
                                                 bool drop_self_loops = false);

// Empirical CDF of the number of distinct ports targeted per prober:
// fraction of probers with |nodes| <= n.
CoverageCurve ports_targeted_cdf(std::span<const TransitionGraph> graphs);

// Sums per-prober transition counts restricted to pairs with both ports in
// scope (pairs crossing an out-of-scope port are dropped, not bridged).
// scope_ips empty means all probers.
TransitionMatrix aggregate_transition_matrix(std::span<const ProbeEvent> events,
                                             std::span<const std::uint32_t> scope_ips,
                                             std::span<const std::uint16_t> ports,
                                             MatrixNorm norm = MatrixNorm::kRow,
                                             bool drop_self_loops = false);

std::string export_graph_dot(const TransitionGraph& g);
std::string export_graph_json(const TransitionGraph& g);
TransitionGraph graph_from_json(const std::string& text);

std::string export_matrix_csv(const TransitionMatrix& m);

}  // namespace darknet
