#include "oimlofa/cascade.hpp"

#include <algorithm>
#include <string>

#include "oimlofa/error.hpp"

namespace oimlofa {

CascadeSimulator::CascadeSimulator(const Graph& graph)
    : graph_(&graph), stamp_(graph.node_count(), 0) {
  activated_.reserve(graph.node_count());
}

std::size_t CascadeSimulator::run(std::span<const NodeId> seeds, Rng& rng) {
  const std::size_t n = graph_->node_count();
  for (NodeId s : seeds) {
    if (s >= n) {
      throw Error(ErrorKind::invalid_argument, "seed " + std::to_string(s) + " out of range");
    }
  }
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  activated_.clear();
  frontier_.clear();
  for (NodeId s : seeds) {
    if (stamp_[s] == epoch_) continue;
    stamp_[s] = epoch_;
    activated_.push_back(s);
    frontier_.push_back(s);
  }

  while (!frontier_.empty()) {
    std::sort(frontier_.begin(), frontier_.end());
    next_.clear();
    for (NodeId u : frontier_) {
      for (const Edge& e : graph_->out_edges(u)) {
        if (stamp_[e.target] == epoch_) continue;
        if (rng.bernoulli(e.prob)) {
          stamp_[e.target] = epoch_;
          activated_.push_back(e.target);
          next_.push_back(e.target);
        }
      }
    }
    frontier_.swap(next_);
  }
  return activated_.size();
}

std::vector<NodeId> simulate_cascade(const Graph& graph, std::span<const NodeId> seeds, Rng& rng) {
  CascadeSimulator sim(graph);
  sim.run(seeds, rng);
  std::vector<NodeId> out(sim.activated().begin(), sim.activated().end());
  std::sort(out.begin(), out.end());
  return out;
}

CascadeEnvironment::CascadeEnvironment(std::shared_ptr<const Graph> graph, std::uint64_t horizon,
                                       std::uint64_t seed)
    : graph_(std::move(graph)), horizon_(horizon), rng_(seed), sim_(*graph_) {
  if (horizon_ == 0) throw Error(ErrorKind::invalid_argument, "horizon must be positive");
  if (graph_->node_count() == 0) throw Error(ErrorKind::invalid_argument, "graph has no nodes");
}

void CascadeEnvironment::require_rounds(std::uint64_t m) const {
  if (remaining() < m) {
    throw Error(ErrorKind::budget_exhausted, "horizon exhausted: " + std::to_string(m) +
                                                 " plays requested, " +
                                                 std::to_string(remaining()) + " remain");
  }
}

PlayResult CascadeEnvironment::play(std::span<const NodeId> seeds) {
  require_rounds(1);
  PlayResult r;
  r.activated_count = sim_.run(seeds, rng_);
  r.reward = static_cast<double>(r.activated_count) / static_cast<double>(node_count());
  log_.push_back({rounds_used_, seeds.size(), r.activated_count, r.reward});
  ++rounds_used_;
  return r;
}

std::uint64_t CascadeEnvironment::total_activated(std::span<const NodeId> seeds, std::uint64_t m) {
  if (m == 0) throw Error(ErrorKind::invalid_argument, "play count must be positive");
  require_rounds(m);
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < m; ++i) total += play(seeds).activated_count;
  return total;
}

double CascadeEnvironment::mean_of_plays(std::span<const NodeId> seeds, std::uint64_t m) {
  const std::uint64_t total = total_activated(seeds, m);
  return static_cast<double>(total) / (static_cast<double>(m) * static_cast<double>(node_count()));
}

}  // namespace oimlofa
