#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oimlofa/cascade.hpp"
#include "oimlofa/graph.hpp"

namespace oimlofa {

/// Plays per estimate for horizon T, n base arms and budget k:
/// ceil((T*sqrt(2 ln T) / (n + 2nk*sqrt(2 ln T)))^(2/3)), at least 1.
std::uint64_t compute_m(std::uint64_t horizon, std::uint64_t n, std::uint64_t k);

/// What heap keys hold. `difference`: estimated f(S+u) minus the running
/// estimate of f(S). `set_value`: estimated f(S+u) itself.
enum class GainSemantics { difference, set_value };

std::string_view to_string(GainSemantics s);
GainSemantics parse_gain_semantics(std::string_view text);

/// Rounds charged per kind. `shortcut` counts zero-cost re-flags, not plays.
struct PlayTally {
  std::uint64_t init = 0;
  std::uint64_t recompute = 0;
  std::uint64_t shortcut = 0;
  std::uint64_t exploit = 0;

  std::uint64_t plays() const noexcept { return init + recompute + exploit; }
};

struct Commit {
  NodeId node;
  std::uint64_t round;  ///< rounds consumed when the node was committed
};

struct RunRecord {
  std::string algorithm;
  std::size_t k = 0;
  std::uint64_t horizon = 0;
  std::uint64_t m = 0;
  GainSemantics semantics = GainSemantics::difference;

  std::vector<double> rewards;          ///< one per round, length == horizon
  std::vector<std::size_t> activated;   ///< raw activated counts, same length
  std::vector<Commit> commits;          ///< commit rounds nondecreasing
  std::uint64_t exploration_end = 0;    ///< index of the first exploitation round
  bool truncated = false;               ///< exploration was cut short by the horizon
  PlayTally tally;

  std::vector<NodeId> committed() const;
  double cumulative_reward() const;
};

/// One node's record in the lazy-forward heap. Gains are kept in activation
/// units: the sum of activated counts over m plays. Divide by m * n for the
/// reward scale.
struct LofaEntry {
  NodeId node = 0;
  std::int64_t mg1 = 0;
  std::int64_t mg2 = 0;
  std::optional<NodeId> prev_best;
  std::size_t flag = 0;
  std::size_t mg2_base = 0;  ///< |S| when mg2 was estimated
};

struct LofaOptions {
  GainSemantics semantics = GainSemantics::difference;
  std::optional<std::uint64_t> m;  ///< overrides compute_m when set
};

/// Lazy Online Forward Algorithm: explores one phase per committed node,
/// re-estimating only heap tops whose keys are stale, then exploits.
class Lofa {
 public:
  Lofa(CascadeEnvironment& env, std::size_t k, LofaOptions options = {});

  /// Estimates every singleton (and its pair with the running best) once.
  void initialize();
  /// Runs one phase of lazy selection; commits exactly one node unless the
  /// horizon runs out, in which case the remaining slots are filled from the
  /// current estimates.
  void select_phase();
  /// Plays the committed set for every remaining round.
  void exploit();

  /// initialize + k phases + exploit.
  RunRecord run();

  std::uint64_t m() const noexcept { return m_; }
  std::size_t phase() const noexcept { return phase_; }
  const std::vector<NodeId>& committed() const noexcept { return committed_; }
  const std::vector<Commit>& commits() const noexcept { return commits_; }
  const std::vector<LofaEntry>& heap() const noexcept { return heap_; }
  std::optional<NodeId> curr_best() const noexcept { return curr_best_; }
  std::optional<NodeId> last_seed() const noexcept { return last_seed_; }
  const PlayTally& tally() const noexcept { return tally_; }
  bool truncated() const noexcept { return truncated_; }
  /// Running estimate of f(S) on the reward scale.
  double current_set_value() const noexcept { return to_reward(set_value_); }
  double to_reward(std::int64_t units) const noexcept;
  /// Current mg1 of `node` on the reward scale (0 before its first estimate).
  double mg1_of(NodeId node) const noexcept { return to_reward(mg1_of_[node]); }

  RunRecord record() const;

 private:
  bool fits(std::uint64_t plays) const noexcept { return env_->remaining() >= plays; }
  std::int64_t estimate(std::vector<NodeId>& set, std::uint64_t& counter);
  std::int64_t gain_from(std::int64_t total, std::int64_t base) const noexcept;
  void push(LofaEntry entry);
  LofaEntry pop();
  void note_evaluated(NodeId node);
  void commit(NodeId node, std::int64_t mg1);
  void commit_from_estimates();

  CascadeEnvironment* env_;
  std::size_t k_;
  LofaOptions options_;
  std::uint64_t m_;
  std::size_t phase_ = 0;
  std::vector<NodeId> committed_;
  std::vector<Commit> commits_;
  std::vector<LofaEntry> heap_;
  std::vector<std::int64_t> mg1_of_;
  std::vector<bool> pushed_;
  std::int64_t set_value_ = 0;
  std::optional<NodeId> curr_best_;
  std::optional<NodeId> last_seed_;
  PlayTally tally_;
  bool initialized_ = false;
  bool truncated_ = false;
  std::uint64_t exploration_end_ = 0;
};

RunRecord lofa_run(CascadeEnvironment& env, std::size_t k, LofaOptions options = {});

/// Explore-then-commit greedy: each phase estimates every unchosen node
/// appended to S with m plays and commits the best.
RunRecord etcg_run(CascadeEnvironment& env, std::size_t k,
                   std::optional<std::uint64_t> m_override = std::nullopt);

/// Plays `seeds` for `rounds` rounds. Returns the rewards of those plays.
std::vector<double> exploit(CascadeEnvironment& env, std::span<const NodeId> seeds,
                            std::uint64_t rounds);

/// Plays a fixed seed set for the whole horizon.
RunRecord fixed_set_run(CascadeEnvironment& env, std::span<const NodeId> seeds);

/// Common interface over the online policies.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual RunRecord run(CascadeEnvironment& env, std::size_t k) = 0;
};

class LofaPolicy final : public Policy {
 public:
  explicit LofaPolicy(LofaOptions options = {}) : options_(options) {}
  std::string name() const override { return "lofa"; }
  RunRecord run(CascadeEnvironment& env, std::size_t k) override {
    return lofa_run(env, k, options_);
  }

 private:
  LofaOptions options_;
};

class EtcgPolicy final : public Policy {
 public:
  std::string name() const override { return "etcg"; }
  RunRecord run(CascadeEnvironment& env, std::size_t k) override { return etcg_run(env, k); }
};

/// Reference policy that plays a precomputed set (the offline greedy set).
class FixedSetPolicy final : public Policy {
 public:
  explicit FixedSetPolicy(std::vector<NodeId> seeds) : seeds_(std::move(seeds)) {}
  std::string name() const override { return "greedy-fixed"; }
  RunRecord run(CascadeEnvironment& env, std::size_t k) override;

 private:
  std::vector<NodeId> seeds_;
};

}  // namespace oimlofa
