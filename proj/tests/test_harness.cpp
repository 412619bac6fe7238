#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oimlofa/error.hpp"
#include "oimlofa/harness.hpp"

using namespace oimlofa;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("oimlofa_harness_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_config(const fs::path& out) {
  ExperimentConfig c;
  c.graph_path = "generated";
  c.k = 2;
  c.horizons = {300};
  c.algorithms = {"lofa"};
  c.repetitions = 2;
  c.base_seed = 5;
  c.output_dir = out.string();
  c.eval_samples = 200;
  return c;
}

}  // namespace

TEST_CASE("cumulative regret") {
  const std::vector<double> r{0.5, 0.5, 0.5};
  CHECK(cumulative_regret(r, 0.5) == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(cumulative_regret(std::vector<double>(4, 0.0), 0.5) ==
        std::vector<double>{0.5, 1.0, 1.5, 2.0});
  CHECK(cumulative_regret(std::vector<double>{1.0, 1.0}, 0.5) == std::vector<double>{-0.5, -1.0});
}

TEST_CASE("moving average") {
  const std::vector<double> s{0, 1, 0, 1};
  CHECK(moving_average(s, 2) == std::vector<double>{0, 0.5, 0.5, 0.5});
  CHECK(moving_average(s, 1) == s);
  CHECK(moving_average(s, 10) == std::vector<double>{0, 0.5, 1.0 / 3.0, 0.5});
  CHECK(moving_average(std::vector<double>{}, 3).empty());
  CHECK(moving_average(std::vector<double>(7, 0.25), 3) == std::vector<double>(7, 0.25));
  CHECK_THROWS_AS(moving_average(s, 0), Error);
}

TEST_CASE("aggregate uses the sample standard deviation") {
  std::vector<RunSummary> rows(3);
  const double regrets[] = {1.0, 2.0, 3.0};
  for (int i = 0; i < 3; ++i) {
    rows[i].algorithm = "lofa";
    rows[i].k = 2;
    rows[i].horizon = 10;
    rows[i].regret = regrets[i];
  }
  const auto agg = aggregate(rows);
  REQUIRE(agg.size() == 1);
  CHECK(agg[0].regret_mean == 2.0);
  CHECK(agg[0].regret_std == 1.0);
  CHECK(agg[0].reps == 3);

  std::vector<RunSummary> two(2, rows[0]);
  two[0].regret = 1.0;
  two[1].regret = 3.0;
  const auto pair = aggregate(two);
  CHECK(pair[0].regret_mean == 2.0);
  CHECK(pair[0].regret_std == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(aggregate(std::span<const RunSummary>(rows.data(), 1))[0].regret_std == 0.0);
  std::vector<RunSummary> same(10, rows[0]);
  CHECK(aggregate(same)[0].regret_std == 0.0);
}

TEST_CASE("config validation") {
  ExperimentConfig c = small_config("x");
  CHECK_NOTHROW(c.validate());
  auto broken = [&](auto mutate) {
    ExperimentConfig d = c;
    mutate(d);
    CHECK_THROWS_AS(d.validate(), Error);
  };
  broken([](ExperimentConfig& d) { d.repetitions = 0; });
  broken([](ExperimentConfig& d) { d.window = 0; });
  broken([](ExperimentConfig& d) { d.horizons = {200, 100}; });
  broken([](ExperimentConfig& d) { d.horizons = {100, 100}; });
  broken([](ExperimentConfig& d) { d.algorithms = {"ucb"}; });
  broken([](ExperimentConfig& d) { d.benchmark = "best"; });
  broken([](ExperimentConfig& d) { d.prob_mode = "const:7"; });
  broken([](ExperimentConfig& d) { d.k = 0; });
}

TEST_CASE("cell seeds are stable and distinct") {
  CHECK(cell_seed(0, "lofa", 100, 0) == cell_seed(0, "lofa", 100, 0));
  CHECK(cell_seed(0, "lofa", 100, 0) != cell_seed(0, "etcg", 100, 0));
  CHECK(cell_seed(0, "lofa", 100, 0) != cell_seed(0, "lofa", 200, 0));
  CHECK(cell_seed(0, "lofa", 100, 0) != cell_seed(0, "lofa", 100, 1));
  CHECK(cell_seed(1, "lofa", 100, 0) != cell_seed(0, "lofa", 100, 0));
  CHECK(make_run_id("etcg", 4, 20000, 3) == "etcg-k4-T20000-r3");
}

TEST_CASE("one algorithm, one horizon, two reps gives two summary rows") {
  const auto dir = scratch("rows");
  auto g = std::make_shared<const Graph>(make_scale_free_graph(30, 2, 0.2, 1));
  const auto config = small_config(dir);
  const Benchmark b = compute_benchmark(*g, config);
  const ExperimentResult res = run_experiment(config, g, b);
  CHECK(res.summaries.size() == 2);
  const auto summary = read_csv(dir / "summary.csv");
  REQUIRE(summary.size() == 3);
  CHECK(summary[0].size() == 10);
  CHECK(summary[0][0] == "run_id");

  for (const auto& s : res.summaries) {
    const auto rounds = read_csv(dir / ("rounds_" + s.run_id + ".csv"));
    CHECK(rounds[0] == std::vector<std::string>{"run_id", "algorithm", "k", "T", "rep", "t",
                                                "reward", "activated"});
    CHECK(rounds.size() == 301);
    double sum = 0.0;
    for (std::size_t i = 1; i < rounds.size(); ++i) sum += std::stod(rounds[i][6]);
    // Per-round rewards are printed with 9 significant digits.
    CHECK(std::abs(sum - s.cumulative_reward) <= 300 * 5e-9);
    CHECK(s.regret == doctest::Approx(300 * b.value - s.cumulative_reward));
  }
  const auto agg = read_csv(dir / "aggregate.csv");
  REQUIRE(agg.size() == 2);
  CHECK(agg[1][5] == "2");
  const std::string manifest = slurp(dir / "manifest.txt");
  CHECK(manifest.find("reps=2\n") != std::string::npos);
  CHECK(manifest.find("m.T300=") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("rerunning an identical config reproduces every file byte for byte") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  auto g = std::make_shared<const Graph>(make_scale_free_graph(40, 2, 0.15, 2));
  auto run = [&](const fs::path& out, unsigned jobs) {
    ExperimentConfig c = small_config(out);
    c.algorithms = {"lofa", "etcg", "greedy-fixed"};
    c.horizons = {200, 400};
    c.jobs = jobs;
    c.output_dir = out.string();
    return run_experiment(c, g, compute_benchmark(*g, c));
  };
  run(a, 1);
  run(b, 3);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name == "manifest.txt") continue;  // records the job count
    CHECK(slurp(entry.path()) == slurp(b / name));
    ++files;
  }
  CHECK(files == 3 * 2 * 2 + 2);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("greedy-fixed on a deterministic line earns full reward") {
  const auto dir = scratch("fixed");
  auto g = std::make_shared<const Graph>(make_line_graph(5, 1.0));
  ExperimentConfig c = small_config(dir);
  c.k = 1;
  c.horizons = {5};
  c.repetitions = 1;
  c.algorithms = {"greedy-fixed"};
  const Benchmark b = compute_benchmark(*g, c);
  CHECK(b.greedy_seeds == std::vector<NodeId>{0});
  CHECK(b.value == 1.0);
  const auto res = run_experiment(c, g, b);
  CHECK(res.summaries[0].cumulative_reward == 5.0);
  CHECK(res.summaries[0].regret == 0.0);
  fs::remove_all(dir);
}

TEST_CASE("greedy-fixed on an inert graph earns k/n per round") {
  const auto dir = scratch("inert");
  auto g = std::make_shared<const Graph>(Graph::from_edges(4, {}));
  ExperimentConfig c = small_config(dir);
  c.horizons = {10};
  c.repetitions = 1;
  c.algorithms = {"greedy-fixed"};
  const auto res = run_experiment(c, g, compute_benchmark(*g, c));
  CHECK(res.summaries[0].cumulative_reward == 5.0);
  fs::remove_all(dir);
}

TEST_CASE("stride thins the per-round file only") {
  const auto dir = scratch("stride");
  auto g = std::make_shared<const Graph>(make_star_graph(6, 0.3));
  ExperimentConfig c = small_config(dir);
  c.stride = 7;
  const auto res = run_experiment(c, g, compute_benchmark(*g, c));
  const auto rounds = read_csv(dir / ("rounds_" + res.summaries[0].run_id + ".csv"));
  CHECK(rounds.size() == 1 + (300 + 6) / 7);
  fs::remove_all(dir);
}

TEST_CASE("benchmark cache and optimal benchmark") {
  const auto dir = scratch("cache");
  fs::create_directories(dir);
  auto g = make_line_graph(4, 0.5);
  ExperimentConfig c = small_config(dir);
  c.cache_path = (dir / "g.benchmark").string();
  const Benchmark first = compute_benchmark(g, c);
  CHECK(fs::exists(c.cache_path));
  const Benchmark second = compute_benchmark(g, c);
  CHECK(first.greedy_seeds == second.greedy_seeds);
  CHECK(first.greedy_value == second.greedy_value);

  c.benchmark = "optimal";
  const Benchmark opt = compute_benchmark(g, c);
  CHECK(opt.value == doctest::Approx((1.0 - std::exp(-1.0)) * 0.75).epsilon(1e-12));
  fs::remove_all(dir);
}
