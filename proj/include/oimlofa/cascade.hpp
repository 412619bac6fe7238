#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "oimlofa/graph.hpp"
#include "oimlofa/rng.hpp"

namespace oimlofa {

/// Reusable independent-cascade simulator. Holds scratch buffers so repeated
/// runs on the same graph do not allocate.
///
/// Newly activated nodes of each step are processed in ascending id order and
/// edge coins are flipped lazily, once per (active source, inactive target).
class CascadeSimulator {
 public:
  explicit CascadeSimulator(const Graph& graph);
  CascadeSimulator(Graph&&) = delete;

  /// Runs one cascade and returns the number of active nodes at the end.
  /// Duplicate seeds are ignored; out-of-range seeds throw.
  std::size_t run(std::span<const NodeId> seeds, Rng& rng);

  /// Active set of the last run, in activation order.
  std::span<const NodeId> activated() const noexcept { return activated_; }

 private:
  const Graph* graph_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> activated_;
  std::vector<NodeId> frontier_;
  std::vector<NodeId> next_;
};

/// Final active set (sorted ascending) of one cascade from `seeds`.
std::vector<NodeId> simulate_cascade(const Graph& graph, std::span<const NodeId> seeds, Rng& rng);

struct PlayResult {
  std::size_t activated_count = 0;
  double reward = 0.0;  ///< activated_count / node_count
};

struct RewardLogEntry {
  std::uint64_t round = 0;
  std::size_t seed_set_size = 0;
  std::size_t activated_count = 0;
  double reward = 0.0;
};

/// Full-bandit environment over a fixed graph and horizon. Each play runs one
/// cascade, charges one round, and reveals only the scalar reward.
class CascadeEnvironment {
 public:
  CascadeEnvironment(std::shared_ptr<const Graph> graph, std::uint64_t horizon, std::uint64_t seed);

  PlayResult play(std::span<const NodeId> seeds);

  /// Mean reward of exactly `m` plays. Throws before playing if fewer than
  /// `m` rounds remain.
  double mean_of_plays(std::span<const NodeId> seeds, std::uint64_t m);

  /// Sum of activated counts over exactly `m` plays; the exact integer behind
  /// mean_of_plays (mean = total / (m * node_count)).
  std::uint64_t total_activated(std::span<const NodeId> seeds, std::uint64_t m);

  const Graph& graph() const noexcept { return *graph_; }
  std::size_t node_count() const noexcept { return graph_->node_count(); }
  std::uint64_t horizon() const noexcept { return horizon_; }
  std::uint64_t rounds_used() const noexcept { return rounds_used_; }
  std::uint64_t remaining() const noexcept { return horizon_ - rounds_used_; }
  const std::vector<RewardLogEntry>& reward_log() const noexcept { return log_; }

 private:
  void require_rounds(std::uint64_t m) const;

  std::shared_ptr<const Graph> graph_;
  std::uint64_t horizon_;
  std::uint64_t rounds_used_ = 0;
  Rng rng_;
  CascadeSimulator sim_;
  std::vector<RewardLogEntry> log_;
};

}  // namespace oimlofa
