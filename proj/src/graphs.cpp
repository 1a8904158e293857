#include "darknet/graphs.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace darknet {

TransitionGraph build_transition_graph(std::span<const ProbeEvent> events,
                                       bool drop_self_loops) {
  TransitionGraph g;
  if (events.empty()) return g;
  g.src_ip = events.front().src_ip;
  for (const auto& e : events) ++g.nodes[e.dst_port];
  for (std::size_t i = 0; i + 1 < events.size(); ++i) {
    auto a = events[i].dst_port;
    auto b = events[i + 1].dst_port;
    if (drop_self_loops && a == b) continue;
    ++g.counts[{a, b}];
  }
  // Row-normalize per source port.
  std::unordered_map<std::uint16_t, std::uint64_t> row_totals;
  for (const auto& [pair, n] : g.counts) row_totals[pair.first] += n;
  for (const auto& [pair, n] : g.counts)
    g.edges[pair] = static_cast<double>(n) / static_cast<double>(row_totals[pair.first]);
  return g;
}

std::vector<TransitionGraph> build_prober_graphs(std::span<const ProbeEvent> events,
                                                 bool drop_self_loops) {
  // Group by src_ip keeping input order, then stable-sort by timestamp so
  // ties keep file order.
  std::unordered_map<std::uint32_t, std::vector<ProbeEvent>> by_ip;
  std::vector<std::uint32_t> order;
  for (const auto& e : events) {
    auto [it, inserted] = by_ip.try_emplace(e.src_ip);
    if (inserted) order.push_back(e.src_ip);
    it->second.push_back(e);
  }
  std::vector<TransitionGraph> graphs;
  graphs.reserve(order.size());
  for (auto ip : order) {
    auto& seq = by_ip[ip];
    std::stable_sort(seq.begin(), seq.end(),
                     [](const ProbeEvent& a, const ProbeEvent& b) {
                       return a.timestamp < b.timestamp;
                     });
    graphs.push_back(build_transition_graph(seq, drop_self_loops));
  }
  return graphs;
}

CoverageCurve ports_targeted_cdf(std::span<const TransitionGraph> graphs) {
  CoverageCurve curve;
  if (graphs.empty()) return curve;
  std::vector<std::size_t> sizes;
  sizes.reserve(graphs.size());
  for (const auto& g : graphs) sizes.push_back(g.nodes.size());
  std::sort(sizes.begin(), sizes.end());
  const double n = static_cast<double>(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    // Emit one point per distinct node count.
    if (i + 1 < sizes.size() && sizes[i + 1] == sizes[i]) continue;
    curve.points.push_back({sizes[i], static_cast<double>(i + 1) / n});
  }
  return curve;
}

TransitionMatrix aggregate_transition_matrix(std::span<const ProbeEvent> events,
                                             std::span<const std::uint32_t> scope_ips,
                                             std::span<const std::uint16_t> ports,
                                             MatrixNorm norm, bool drop_self_loops) {
  if (ports.empty()) throw std::invalid_argument("matrix port scope is empty");
  TransitionMatrix m;
  m.ports.assign(ports.begin(), ports.end());
  const std::size_t k = m.ports.size();
  m.counts.assign(k, std::vector<std::uint64_t>(k, 0));
  m.probs.assign(k, std::vector<double>(k, 0.0));

  std::unordered_map<std::uint16_t, std::size_t> port_index;
  for (std::size_t i = 0; i < k; ++i) port_index[m.ports[i]] = i;
  std::unordered_set<std::uint32_t> scope(scope_ips.begin(), scope_ips.end());

  auto graphs = build_prober_graphs(events, drop_self_loops);
  for (const auto& g : graphs) {
    if (!scope.empty() && !scope.contains(g.src_ip)) continue;
    for (const auto& [pair, n] : g.counts) {
      auto a = port_index.find(pair.first);
      auto b = port_index.find(pair.second);
      // Pairs crossing an out-of-scope port are dropped.
      if (a == port_index.end() || b == port_index.end()) continue;
      m.counts[a->second][b->second] += n;
    }
  }

  if (norm == MatrixNorm::kRow) {
    for (std::size_t i = 0; i < k; ++i) {
      std::uint64_t row_total = 0;
      for (auto n : m.counts[i]) row_total += n;
      if (row_total == 0) continue;
      for (std::size_t j = 0; j < k; ++j)
        m.probs[i][j] =
            static_cast<double>(m.counts[i][j]) / static_cast<double>(row_total);
    }
  } else {
    std::uint64_t total = 0;
    for (const auto& row : m.counts)
      for (auto n : row) total += n;
    if (total > 0)
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          m.probs[i][j] =
              static_cast<double>(m.counts[i][j]) / static_cast<double>(total);
  }
  return m;
}

std::string export_graph_dot(const TransitionGraph& g) {
  std::ostringstream out;
  out << "digraph prober_" << format_ipv4(g.src_ip) << " {\n";
  // Replace dots so the graph name stays a valid DOT identifier.
  std::string header = out.str();
  std::replace(header.begin(), header.end(), '.', '_');
  std::ostringstream body;
  std::uint64_t max_hits = 1;
  for (const auto& [_, hits] : g.nodes) max_hits = std::max(max_hits, hits);
  for (const auto& [port, hits] : g.nodes) {
    double size = 0.5 + 1.5 * static_cast<double>(hits) / static_cast<double>(max_hits);
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "  p%u [label=\"%u\\n%llu\", width=%.2f, shape=circle];\n", port,
                  port, static_cast<unsigned long long>(hits), size);
    body << buf;
  }
  for (const auto& [pair, prob] : g.edges) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "  p%u -> p%u [label=\"%.3f\"];\n", pair.first,
                  pair.second, prob);
    body << buf;
  }
  return header + body.str() + "}\n";
}

std::string export_graph_json(const TransitionGraph& g) {
  nlohmann::json j;
  j["src_ip"] = format_ipv4(g.src_ip);
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (const auto& [port, hits] : g.nodes)
    nodes.push_back({{"port", port}, {"hits", hits}});
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const auto& [pair, n] : g.counts)
    edges.push_back({{"from", pair.first},
                     {"to", pair.second},
                     {"count", n},
                     {"prob", g.edges.at(pair)}});
  return j.dump(2);
}

TransitionGraph graph_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  TransitionGraph g;
  auto ip = parse_ipv4(j.at("src_ip").get<std::string>());
  if (!ip) throw std::runtime_error("graph json: bad src_ip");
  g.src_ip = *ip;
  for (const auto& node : j.at("nodes"))
    g.nodes[node.at("port").get<std::uint16_t>()] = node.at("hits").get<std::uint64_t>();
  for (const auto& edge : j.at("edges")) {
    PortPair pair{edge.at("from").get<std::uint16_t>(),
                  edge.at("to").get<std::uint16_t>()};
    g.counts[pair] = edge.at("count").get<std::uint64_t>();
    g.edges[pair] = edge.at("prob").get<double>();
  }
  return g;
}

std::string export_matrix_csv(const TransitionMatrix& m) {
  std::ostringstream out;
  out << "port";
  for (auto p : m.ports) out << ',' << p;
  out << '\n';
  for (std::size_t i = 0; i < m.ports.size(); ++i) {
    out << m.ports[i];
    for (std::size_t j = 0; j < m.ports.size(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), ",%.9g", m.probs[i][j]);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace darknet
