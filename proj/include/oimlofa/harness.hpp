#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "oimlofa/algorithms.hpp"
#include "oimlofa/graph.hpp"

namespace oimlofa {

struct ExperimentConfig {
  std::string graph_path;
  std::string prob_mode = "file";
  std::size_t k = 0;
  std::vector<std::uint64_t> horizons{20000, 40000, 60000, 80000, 100000};
  std::vector<std::string> algorithms{"lofa", "etcg"};
  std::size_t repetitions = 10;
  std::uint64_t base_seed = 0;
  std::size_t window = 100;
  std::string output_dir = "results";
  std::string benchmark = "greedy";  ///< "greedy" or "optimal"
  std::uint64_t eval_samples = 10000;
  GainSemantics semantics = GainSemantics::difference;
  std::uint64_t stride = 1;          ///< keep every stride-th row of per-round files
  unsigned jobs = 1;
  bool record_timing = false;        ///< off keeps every output byte-reproducible
  std::string cache_path;            ///< benchmark cache; empty disables caching

  /// Throws Error(invalid_argument) on any inconsistent field.
  void validate() const;
};

/// The reference the regret is measured against.
struct Benchmark {
  std::string kind;                  ///< "greedy" or "optimal"
  double value = 0.0;                ///< per-round benchmark reward in [0,1]
  std::vector<NodeId> greedy_seeds;  ///< offline greedy set (played by greedy-fixed)
  double greedy_value = 0.0;
};

struct RunSummary {
  std::string run_id;
  std::string algorithm;
  std::size_t k = 0;
  std::uint64_t horizon = 0;
  std::size_t rep = 0;
  double cumulative_reward = 0.0;
  double regret = 0.0;
  double benchmark_value = 0.0;
  double seconds = 0.0;
  std::vector<NodeId> seeds;
  std::uint64_t exploration_end = 0;
};

struct AggregateRow {
  std::string algorithm;
  std::size_t k = 0;
  std::uint64_t horizon = 0;
  double regret_mean = 0.0;
  double regret_std = 0.0;
  std::size_t reps = 0;
};

struct ExperimentResult {
  std::vector<RunSummary> summaries;
  std::vector<AggregateRow> aggregates;
};

/// r[t] = (t+1) * benchmark - sum_{s<=t} rewards[s].
std::vector<double> cumulative_regret(std::span<const double> rewards, double benchmark_value);

/// Trailing mean over the last `window` values (fewer during warm-up).
std::vector<double> moving_average(std::span<const double> series, std::size_t window);

/// Mean and sample standard deviation of regret per (algorithm, k, T), in
/// order of first appearance.
std::vector<AggregateRow> aggregate(std::span<const RunSummary> summaries);

/// Environment seed of one (algorithm, T, rep) cell: base seed mixed with a
/// stable FNV-1a hash of the triple.
std::uint64_t cell_seed(std::uint64_t base_seed, const std::string& algorithm,
                        std::uint64_t horizon, std::size_t rep);

std::string make_run_id(const std::string& algorithm, std::size_t k, std::uint64_t horizon,
                        std::size_t rep);

/// Runs one policy on a fresh environment.
RunRecord run_policy(std::shared_ptr<const Graph> graph, const std::string& algorithm,
                     std::size_t k, std::uint64_t horizon, std::uint64_t seed,
                     GainSemantics semantics, const Benchmark& benchmark);

/// Offline greedy set and value (cached in config.cache_path when set), plus
/// the brute-force optimum when config.benchmark == "optimal".
Benchmark compute_benchmark(const Graph& graph, const ExperimentConfig& config);

/// Runs every (algorithm, T, rep) cell and writes, under config.output_dir:
/// rounds_<run_id>.csv per cell, summary.csv, aggregate.csv and manifest.txt.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::shared_ptr<const Graph> graph, const Benchmark& benchmark);

/// Formats a value with 9 significant digits, as used in every CSV.
std::string format_real(double value);

}  // namespace oimlofa
