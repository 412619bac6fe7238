#pragma once

// Test-only helpers: random fixture graphs and a naive greedy oracle that
// shares no code with the library's selection or simulation paths.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "oimlofa/graph.hpp"

namespace fixtures {

using oimlofa::EdgeSpec;
using oimlofa::Graph;
using oimlofa::NodeId;

/// Random graph with every ordered pair present with probability `density`;
/// probabilities are 0 or 1 when `deterministic`, else uniform in [0,1].
inline Graph random_graph(std::mt19937_64& gen, std::size_t n, double density, bool deterministic) {
  std::bernoulli_distribution has_edge(density);
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  std::vector<EdgeSpec> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if (u == v || !has_edge(gen)) continue;
      edges.push_back({u, v, deterministic ? (coin(gen) ? 1.0 : 0.0) : prob(gen)});
    }
  }
  return Graph::from_edges(n, edges);
}

/// Nodes reachable from `seeds` over edges with p == 1.
inline std::size_t reach_count(const Graph& g, const std::vector<NodeId>& seeds) {
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> stack;
  std::size_t count = 0;
  for (NodeId s : seeds) {
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
      ++count;
    }
  }
  const auto edges = g.edges();
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (const auto& e : edges) {
      if (e.source == u && e.prob == 1.0 && !seen[e.target]) {
        seen[e.target] = 1;
        stack.push_back(e.target);
        ++count;
      }
    }
  }
  return count;
}

/// Non-lazy greedy on a deterministic graph: at every step evaluate every
/// remaining node, keep the largest gain, ties to the smaller id.
inline std::vector<NodeId> naive_greedy(const Graph& g, std::size_t k) {
  std::vector<NodeId> chosen;
  std::vector<char> used(g.node_count(), 0);
  for (std::size_t step = 0; step < k; ++step) {
    const std::size_t base = reach_count(g, chosen);
    long best_gain = -1;
    NodeId best = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      if (used[u]) continue;
      auto with = chosen;
      with.push_back(u);
      const long gain = static_cast<long>(reach_count(g, with)) - static_cast<long>(base);
      if (gain > best_gain) {
        best_gain = gain;
        best = u;
      }
    }
    chosen.push_back(best);
    used[best] = 1;
  }
  return chosen;
}

}  // namespace fixtures
