#include "oimlofa/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oimlofa/error.hpp"

namespace oimlofa {

std::uint64_t compute_m(std::uint64_t horizon, std::uint64_t n, std::uint64_t k) {
  if (horizon < 2) throw Error(ErrorKind::invalid_argument, "compute_m needs T >= 2");
  if (n < 1 || k < 1) throw Error(ErrorKind::invalid_argument, "compute_m needs n >= 1 and k >= 1");
  const double t = static_cast<double>(horizon);
  const double root = std::sqrt(2.0 * std::log(t));
  const double nn = static_cast<double>(n);
  const double ratio = t * root / (nn + 2.0 * nn * static_cast<double>(k) * root);
  const double m = std::ceil(std::pow(ratio, 2.0 / 3.0));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(m));
}

std::string_view to_string(GainSemantics s) {
  return s == GainSemantics::difference ? "diff" : "value";
}

GainSemantics parse_gain_semantics(std::string_view text) {
  if (text == "diff") return GainSemantics::difference;
  if (text == "value") return GainSemantics::set_value;
  throw Error(ErrorKind::invalid_argument,
              "unknown gain semantics '" + std::string(text) + "' (expected diff or value)");
}

std::vector<NodeId> RunRecord::committed() const {
  std::vector<NodeId> out;
  out.reserve(commits.size());
  for (const auto& c : commits) out.push_back(c.node);
  return out;
}

double RunRecord::cumulative_reward() const {
  return std::accumulate(rewards.begin(), rewards.end(), 0.0);
}

namespace {

void check_budget(const CascadeEnvironment& env, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::invalid_argument, "k must be positive");
  if (k > env.node_count()) {
    throw Error(ErrorKind::invalid_argument, "k = " + std::to_string(k) + " exceeds node count " +
                                                 std::to_string(env.node_count()));
  }
}

// Max-heap order: larger mg1 first, then smaller node id.
bool heap_less(const LofaEntry& a, const LofaEntry& b) {
  return a.mg1 != b.mg1 ? a.mg1 < b.mg1 : a.node > b.node;
}

void fill_from_log(const CascadeEnvironment& env, RunRecord& rec) {
  rec.rewards.clear();
  rec.activated.clear();
  rec.rewards.reserve(env.reward_log().size());
  rec.activated.reserve(env.reward_log().size());
  for (const auto& e : env.reward_log()) {
    rec.rewards.push_back(e.reward);
    rec.activated.push_back(e.activated_count);
  }
}

}  // namespace

Lofa::Lofa(CascadeEnvironment& env, std::size_t k, LofaOptions options)
    : env_(&env), k_(k), options_(options) {
  check_budget(env, k);
  m_ = options.m ? *options.m : compute_m(env.horizon(), env.node_count(), k);
  if (m_ == 0) throw Error(ErrorKind::invalid_argument, "m must be positive");
  mg1_of_.assign(env.node_count(), 0);
  pushed_.assign(env.node_count(), false);
}

double Lofa::to_reward(std::int64_t units) const noexcept {
  return static_cast<double>(units) /
         (static_cast<double>(m_) * static_cast<double>(env_->node_count()));
}

std::int64_t Lofa::estimate(std::vector<NodeId>& set, std::uint64_t& counter) {
  counter += m_;
  return static_cast<std::int64_t>(env_->total_activated(set, m_));
}

std::int64_t Lofa::gain_from(std::int64_t total, std::int64_t base) const noexcept {
  return options_.semantics == GainSemantics::difference ? total - base : total;
}

void Lofa::push(LofaEntry entry) {
  pushed_[entry.node] = true;
  heap_.push_back(entry);
  std::push_heap(heap_.begin(), heap_.end(), heap_less);
}

LofaEntry Lofa::pop() {
  std::pop_heap(heap_.begin(), heap_.end(), heap_less);
  LofaEntry top = heap_.back();
  heap_.pop_back();
  return top;
}

void Lofa::note_evaluated(NodeId node) {
  if (!curr_best_ || mg1_of_[node] > mg1_of_[*curr_best_] ||
      (mg1_of_[node] == mg1_of_[*curr_best_] && node < *curr_best_)) {
    curr_best_ = node;
  }
}

void Lofa::commit(NodeId node, std::int64_t mg1) {
  committed_.push_back(node);
  commits_.push_back({node, env_->rounds_used()});
  last_seed_ = node;
  set_value_ = options_.semantics == GainSemantics::difference ? set_value_ + mg1 : mg1;
}

void Lofa::commit_from_estimates() {
  truncated_ = true;
  while (committed_.size() < k_ && !heap_.empty()) {
    const LofaEntry top = pop();
    commit(top.node, top.mg1);
  }
  for (NodeId u = 0; committed_.size() < k_ && u < env_->node_count(); ++u) {
    if (!pushed_[u]) commit(u, 0);
  }
  phase_ = committed_.size();
}

void Lofa::initialize() {
  if (initialized_) throw Error(ErrorKind::invalid_argument, "LOFA already initialized");
  initialized_ = true;
  std::vector<NodeId> set;
  for (NodeId u = 0; u < env_->node_count(); ++u) {
    if (!fits(m_)) {
      commit_from_estimates();
      return;
    }
    LofaEntry e;
    e.node = u;
    set.assign({u});
    e.mg1 = gain_from(estimate(set, tally_.init), set_value_);
    mg1_of_[u] = e.mg1;
    e.prev_best = curr_best_;
    e.mg2_base = 0;
    bool out_of_rounds = false;
    if (!curr_best_) {
      e.mg2 = e.mg1;
    } else if (fits(m_)) {
      set.assign({u, *curr_best_});
      e.mg2 = gain_from(estimate(set, tally_.init), set_value_ + mg1_of_[*curr_best_]);
    } else {
      e.mg2 = e.mg1;
      e.prev_best.reset();
      out_of_rounds = true;
    }
    e.flag = 0;
    push(e);
    note_evaluated(u);
    if (out_of_rounds) {
      commit_from_estimates();
      return;
    }
  }
}

void Lofa::select_phase() {
  if (!initialized_) initialize();
  if (committed_.size() >= k_) return;
  const std::size_t phase = committed_.size() + 1;
  phase_ = phase;
  curr_best_.reset();

  std::vector<NodeId> set;
  while (true) {
    if (heap_.empty()) throw Error(ErrorKind::invalid_argument, "heap exhausted before commit");
    LofaEntry u = pop();

    if (u.flag == phase) {
      commit(u.node, u.mg1);
      return;
    }

    // mg2 is only reusable when it was measured against exactly the current
    // set, i.e. its base plus prev_best is what has been committed since.
    const bool mg2_current =
        u.prev_best == last_seed_ && u.mg2_base + (u.prev_best ? 1 : 0) == committed_.size();
    if (mg2_current) {
      u.mg1 = u.mg2;
      ++tally_.shortcut;
    } else {
      if (!fits(m_)) {
        push(u);
        commit_from_estimates();
        return;
      }
      set.assign(committed_.begin(), committed_.end());
      set.push_back(u.node);
      u.mg1 = gain_from(estimate(set, tally_.recompute), set_value_);
      mg1_of_[u.node] = u.mg1;
      u.prev_best = curr_best_;
      u.mg2_base = committed_.size();
      bool out_of_rounds = false;
      if (!curr_best_) {
        u.mg2 = u.mg1;
      } else if (fits(m_)) {
        set.assign(committed_.begin(), committed_.end());
        set.push_back(*curr_best_);
        set.push_back(u.node);
        u.mg2 = gain_from(estimate(set, tally_.recompute), set_value_ + mg1_of_[*curr_best_]);
      } else {
        u.mg2 = u.mg1;
        u.prev_best.reset();
        out_of_rounds = true;
      }
      if (out_of_rounds) {
        u.flag = phase;
        push(u);
        note_evaluated(u.node);
        commit_from_estimates();
        return;
      }
    }
    mg1_of_[u.node] = u.mg1;
    u.flag = phase;
    push(u);
    note_evaluated(u.node);
  }
}

void Lofa::exploit() {
  exploration_end_ = env_->rounds_used();
  const std::uint64_t rounds = env_->remaining();
  oimlofa::exploit(*env_, committed_, rounds);
  tally_.exploit += rounds;
}

RunRecord Lofa::record() const {
  RunRecord rec;
  rec.algorithm = "lofa";
  rec.k = k_;
  rec.horizon = env_->horizon();
  rec.m = m_;
  rec.semantics = options_.semantics;
  fill_from_log(*env_, rec);
  rec.commits = commits_;
  rec.exploration_end = exploration_end_;
  rec.truncated = truncated_;
  rec.tally = tally_;
  return rec;
}

RunRecord Lofa::run() {
  initialize();
  while (committed_.size() < k_) select_phase();
  exploit();
  return record();
}

RunRecord lofa_run(CascadeEnvironment& env, std::size_t k, LofaOptions options) {
  if (env.horizon() < 2) throw Error(ErrorKind::invalid_argument, "horizon must be >= 2");
  Lofa lofa(env, k, options);
  return lofa.run();
}

std::vector<double> exploit(CascadeEnvironment& env, std::span<const NodeId> seeds,
                            std::uint64_t rounds) {
  std::vector<double> rewards;
  rewards.reserve(rounds);
  for (std::uint64_t r = 0; r < rounds; ++r) rewards.push_back(env.play(seeds).reward);
  return rewards;
}

RunRecord etcg_run(CascadeEnvironment& env, std::size_t k, std::optional<std::uint64_t> m_override) {
  check_budget(env, k);
  if (env.horizon() < 2) throw Error(ErrorKind::invalid_argument, "horizon must be >= 2");
  const std::size_t n = env.node_count();

  RunRecord rec;
  rec.algorithm = "etcg";
  rec.k = k;
  rec.horizon = env.horizon();
  rec.m = m_override ? *m_override : compute_m(env.horizon(), n, k);
  if (rec.m == 0) throw Error(ErrorKind::invalid_argument, "m must be positive");

  std::vector<NodeId> committed;
  std::vector<bool> chosen(n, false);
  std::vector<NodeId> set;
  auto commit = [&](NodeId u) {
    committed.push_back(u);
    chosen[u] = true;
    rec.commits.push_back({u, env.rounds_used()});
  };

  for (std::size_t phase = 1; phase <= k; ++phase) {
    std::uint64_t& counter = phase == 1 ? rec.tally.init : rec.tally.recompute;
    // (total, node) for every candidate estimated this phase.
    std::vector<std::pair<std::uint64_t, NodeId>> scored;
    for (NodeId a = 0; a < n; ++a) {
      if (chosen[a]) continue;
      if (env.remaining() < rec.m) {
        rec.truncated = true;
        break;
      }
      set.assign(committed.begin(), committed.end());
      set.push_back(a);
      scored.emplace_back(env.total_activated(set, rec.m), a);
      counter += rec.m;
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    if (!rec.truncated) {
      commit(scored.front().second);
      continue;
    }
    // Out of rounds: extend S from this phase's estimates, then by id.
    for (const auto& [total, a] : scored) {
      if (committed.size() == k) break;
      commit(a);
    }
    for (NodeId a = 0; a < n && committed.size() < k; ++a) {
      if (!chosen[a]) commit(a);
    }
    break;
  }

  rec.exploration_end = env.rounds_used();
  const std::uint64_t rounds = env.remaining();
  exploit(env, committed, rounds);
  rec.tally.exploit = rounds;
  fill_from_log(env, rec);
  return rec;
}

RunRecord fixed_set_run(CascadeEnvironment& env, std::span<const NodeId> seeds) {
  RunRecord rec;
  rec.algorithm = "greedy-fixed";
  rec.k = seeds.size();
  rec.horizon = env.horizon();
  for (NodeId u : seeds) rec.commits.push_back({u, 0});
  exploit(env, seeds, env.remaining());
  rec.tally.exploit = env.horizon();
  fill_from_log(env, rec);
  return rec;
}

RunRecord FixedSetPolicy::run(CascadeEnvironment& env, std::size_t k) {
  if (k != seeds_.size()) {
    throw Error(ErrorKind::invalid_argument, "fixed set size does not match k");
  }
  return fixed_set_run(env, seeds_);
}

}  // namespace oimlofa
