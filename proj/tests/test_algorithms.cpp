#include <algorithm>
#include <memory>
#include <random>

#include "doctest.h"
#include "oimlofa/algorithms.hpp"
#include "oimlofa/error.hpp"
#include "oimlofa/oracle.hpp"
#include "support/fixtures.hpp"

using namespace oimlofa;

namespace {

std::shared_ptr<const Graph> share(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

std::shared_ptr<const Graph> isolated(std::size_t n) { return share(Graph::from_edges(n, {})); }

}  // namespace

TEST_CASE("compute_m matches high-precision evaluation") {
  // Reference values from a 50-digit evaluation of the formula.
  CHECK(compute_m(100000, 534, 4) == 9);     // 8.0439...
  CHECK(compute_m(100, 534, 4) == 1);        // 0.0797...
  CHECK(compute_m(20000, 534, 16) == 2);     // 1.1054...
  CHECK(compute_m(20000, 200, 4) == 6);      // 5.2875...
  CHECK(compute_m(100000, 534, 16) == 4);    // 3.2334...
  CHECK(compute_m(1000, 5, 2) == 13);        // 12.9957...
  CHECK_THROWS_AS(compute_m(1, 10, 2), Error);
  CHECK_THROWS_AS(compute_m(100, 0, 2), Error);
}

TEST_CASE("compute_m is nondecreasing in the horizon") {
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<std::uint64_t> nd(1, 2000);
  std::uniform_int_distribution<std::uint64_t> kd(1, 32);
  std::uniform_int_distribution<std::uint64_t> td(2, 2000000);
  for (int i = 0; i < 2000; ++i) {
    const auto n = nd(gen);
    const auto k = kd(gen);
    auto t1 = td(gen);
    auto t2 = td(gen);
    if (t1 > t2) std::swap(t1, t2);
    CHECK(compute_m(t1, n, k) <= compute_m(t2, n, k));
    CHECK(compute_m(t1, n, k) >= 1);
  }
}

TEST_CASE("initialization on a constant environment") {
  CascadeEnvironment env(isolated(3), 1000, 1);
  Lofa lofa(env, 1, {GainSemantics::difference, 4});
  lofa.initialize();
  REQUIRE(lofa.heap().size() == 3);
  for (NodeId u = 0; u < 3; ++u) CHECK(lofa.mg1_of(u) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(lofa.heap().front().node == 0);
  // First node: no curr_best yet, so no pair plays. Others: single + pair.
  CHECK(env.rounds_used() == 4 + 2 * 8);
  for (const auto& e : lofa.heap()) {
    CHECK(e.flag == 0);
    if (e.node == 0) {
      CHECK_FALSE(e.prev_best.has_value());
      CHECK(e.mg2 == e.mg1);
    } else {
      CHECK(e.prev_best == NodeId{0});
    }
  }
}

TEST_CASE("initialization on a deterministic chain") {
  CascadeEnvironment env(share(make_line_graph(3, 1.0)), 1000, 1);
  Lofa lofa(env, 1, {GainSemantics::difference, 5});
  lofa.initialize();
  CHECK(lofa.mg1_of(0) == 1.0);
  CHECK(lofa.mg1_of(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(lofa.mg1_of(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(lofa.curr_best() == NodeId{0});
}

TEST_CASE("phases on a constant environment commit by id and reuse pair estimates") {
  CascadeEnvironment env(isolated(4), 1000, 1);
  Lofa lofa(env, 2, {GainSemantics::difference, 3});
  lofa.initialize();
  lofa.select_phase();
  CHECK(lofa.committed() == std::vector<NodeId>{0});
  const auto before = env.rounds_used();
  const auto shortcuts = lofa.tally().shortcut;
  lofa.select_phase();
  // Node 1's pair estimate with node 0 is exactly the gain over S = {0}.
  CHECK(lofa.committed() == std::vector<NodeId>{0, 1});
  CHECK(env.rounds_used() == before);
  CHECK(lofa.tally().shortcut == shortcuts + 1);
  // Every remaining gain over S is zero.
  for (const auto& e : lofa.heap()) {
    if (e.flag == 2) CHECK(e.mg1 == 0);
  }
  CHECK(lofa.current_set_value() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("cumulative reward on a constant environment follows the schedule") {
  // n = 4, k = 2, T = 1000 gives m = 16. Initialization plays 4 singletons
  // (reward 1/4) and 3 pairs (reward 1/2) m times each; both phases then
  // commit via zero-cost re-flags; the remaining 1000 - 7m rounds play a
  // pair. Total = 4m/4 + 3m/2 + (1000 - 7m)/2 = 40 + 444.
  CascadeEnvironment env(isolated(4), 1000, 1);
  const RunRecord rec = lofa_run(env, 2);
  CHECK(rec.m == 16);
  CHECK(rec.rewards.size() == 1000);
  CHECK(rec.exploration_end == 112);
  CHECK(rec.cumulative_reward() == doctest::Approx(484.0).epsilon(1e-12));
  CHECK(rec.committed() == std::vector<NodeId>{0, 1});
  CHECK(rec.tally.init == 112);
  CHECK(rec.tally.recompute == 0);
  CHECK(rec.tally.exploit == 888);
}

TEST_CASE("k = 1 on a deterministic graph commits the best single node") {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = fixtures::random_graph(gen, 9, 0.25, true);
    NodeId best = 0;
    double best_value = -1.0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      const double v = exact_spread(g, std::vector<NodeId>{u});
      if (v > best_value) {
        best_value = v;
        best = u;
      }
    }
    CascadeEnvironment env(share(g), 5000, trial);
    CHECK(lofa_run(env, 1).committed() == std::vector<NodeId>{best});
  }
}

TEST_CASE("lazy selection matches naive greedy under deterministic feedback") {
  std::mt19937_64 gen(2025);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 11;
    const Graph g = fixtures::random_graph(gen, n, 0.3, true);
    const std::size_t k = 1 + trial % std::min<std::size_t>(4, n);
    const auto expected = fixtures::naive_greedy(g, k);
    CascadeEnvironment lofa_env(share(g), 100000, trial);
    const RunRecord rec = lofa_run(lofa_env, k);
    CHECK(rec.committed() == expected);
    CHECK_FALSE(rec.truncated);
    CascadeEnvironment env(share(g), 100000, trial);
    CHECK(etcg_run(env, k).committed() == expected);
  }
}

TEST_CASE("set-value keys still commit k distinct nodes") {
  // Stale set values are lower bounds, so greedy order is not guaranteed.
  std::mt19937_64 gen(2025);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 11;
    const Graph g = fixtures::random_graph(gen, n, 0.3, true);
    const std::size_t k = 1 + trial % std::min<std::size_t>(4, n);
    CascadeEnvironment env(share(g), 100000, trial);
    const RunRecord rec = lofa_run(env, k, {GainSemantics::set_value, std::nullopt});
    auto seeds = rec.committed();
    CHECK(seeds.size() == k);
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
    CHECK(rec.tally.plays() == 100000);
  }
}

TEST_CASE("each phase recomputes a node at most once") {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = fixtures::random_graph(gen, 10, 0.3, false);
    CascadeEnvironment env(share(g), 50000, trial);
    Lofa lofa(env, 4);
    lofa.initialize();
    for (std::size_t phase = 1; phase <= 4; ++phase) {
      const auto before = lofa.tally().recompute;
      const auto rounds_before = env.rounds_used();
      lofa.select_phase();
      const auto remaining_nodes = 10 - (phase - 1);
      CHECK(lofa.tally().recompute - before <= 2 * lofa.m() * remaining_nodes);
      // Every round is accounted for by a recompute play.
      CHECK(env.rounds_used() - rounds_before == lofa.tally().recompute - before);
      for (const auto& e : lofa.heap()) CHECK(e.flag <= lofa.phase());
    }
  }
}

TEST_CASE("ETCG exploration follows its schedule") {
  CascadeEnvironment env(isolated(5), 1000, 1);
  const RunRecord rec = etcg_run(env, 2, 3);
  CHECK(rec.exploration_end == 27);
  CHECK(rec.tally.init + rec.tally.recompute == 27);
  CHECK(rec.committed() == std::vector<NodeId>{0, 1});

  CascadeEnvironment env3(isolated(6), 5000, 1);
  CHECK(etcg_run(env3, 3).committed() == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("exploit") {
  CascadeEnvironment env(isolated(4), 10, 1);
  CHECK(exploit(env, std::vector<NodeId>{0, 1}, 0).empty());
  for (double r : exploit(env, std::vector<NodeId>{0, 1}, 5)) CHECK(r == 0.5);

  CascadeEnvironment chain(share(make_line_graph(5, 1.0)), 10, 1);
  for (double r : exploit(chain, std::vector<NodeId>{0}, 10)) CHECK(r == 1.0);
}

TEST_CASE("short horizons still consume exactly T rounds") {
  for (std::uint64_t t : {2, 3, 5, 17, 40}) {
    CascadeEnvironment a(share(make_scale_free_graph(20, 2, 0.3, 1)), t, 3);
    const RunRecord lofa = lofa_run(a, 3, {GainSemantics::difference, 4});
    CHECK(lofa.rewards.size() == t);
    CHECK(lofa.tally.plays() == t);
    CHECK(lofa.committed().size() == 3);
    CHECK(lofa.truncated);

    CascadeEnvironment b(share(make_scale_free_graph(20, 2, 0.3, 1)), t, 3);
    const RunRecord etcg = etcg_run(b, 3, 4);
    CHECK(etcg.rewards.size() == t);
    CHECK(etcg.tally.plays() == t);
    CHECK(etcg.committed().size() == 3);
  }
}

TEST_CASE("early commit extends S from the current estimates") {
  // 4 isolated nodes, m = 2: initialization needs 2 + 3*4 = 14 rounds; with
  // T = 9 it stops after node 2's single estimate (2 + 4 + 2 rounds), then
  // commits heap order (0, 1) and exploits the last round.
  CascadeEnvironment env(isolated(4), 9, 1);
  const RunRecord rec = lofa_run(env, 2, {GainSemantics::difference, 2});
  CHECK(rec.truncated);
  CHECK(rec.committed() == std::vector<NodeId>{0, 1});
  CHECK(rec.exploration_end == 8);
  CHECK(rec.tally.exploit == 1);
  CHECK(rec.commits[0].round == 8);
  CHECK(rec.commits[1].round == 8);
}

TEST_CASE("argument errors") {
  CascadeEnvironment env(isolated(3), 100, 1);
  CHECK_THROWS_AS(lofa_run(env, 4), Error);
  CHECK_THROWS_AS(lofa_run(env, 0), Error);
  CHECK_THROWS_AS(etcg_run(env, 4), Error);
  CascadeEnvironment one(isolated(3), 1, 1);
  CHECK_THROWS_AS(lofa_run(one, 1), Error);
  CHECK(parse_gain_semantics("value") == GainSemantics::set_value);
  CHECK_THROWS_AS(parse_gain_semantics("raw"), Error);
}

TEST_CASE("policies share one interface") {
  auto g = share(make_star_graph(6, 0.4));
  std::vector<std::unique_ptr<Policy>> policies;
  policies.push_back(std::make_unique<LofaPolicy>());
  policies.push_back(std::make_unique<EtcgPolicy>());
  policies.push_back(std::make_unique<FixedSetPolicy>(std::vector<NodeId>{0, 1}));
  for (auto& p : policies) {
    CascadeEnvironment env(g, 3000, 4);
    const RunRecord rec = p->run(env, 2);
    CHECK(rec.algorithm == p->name());
    CHECK(rec.rewards.size() == 3000);
    CHECK(rec.tally.plays() == 3000);
    for (std::size_t i = 1; i < rec.commits.size(); ++i) {
      CHECK(rec.commits[i].round >= rec.commits[i - 1].round);
    }
  }
}
