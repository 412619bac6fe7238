#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oimlofa/graph.hpp"

namespace oimlofa {

/// Most edges with 0 < p < 1 that exact enumeration accepts.
inline constexpr std::size_t kMaxRandomEdges = 20;
/// Most candidate sets brute_force_best will evaluate.
inline constexpr std::uint64_t kMaxBruteForceSets = 100'000;

struct OracleResult {
  std::vector<NodeId> seed_set;
  double estimated_value = 0.0;         ///< normalized to [0,1]
  std::vector<double> per_step_gains;   ///< normalized, one per seed
  std::optional<std::uint64_t> samples_used;  ///< nullopt for exact evaluation
};

/// Expected number of active nodes, by enumerating every live-edge
/// realization of the edges with 0 < p < 1. Edges with p in {0,1} are fixed.
double exact_expected_activated(const Graph& graph, std::span<const NodeId> seeds);

/// exact_expected_activated / node_count.
double exact_spread(const Graph& graph, std::span<const NodeId> seeds);

/// Best set of size at most k under exact_spread; lexicographically smallest
/// among ties.
OracleResult brute_force_best(const Graph& graph, std::size_t k);

/// Expected activated count of a seed set (unnormalized).
using SpreadEvaluator = std::function<double(std::span<const NodeId>)>;

/// CELF lazy greedy with an arbitrary spread evaluator. Ties go to the
/// smaller node id. Values in the result are normalized.
OracleResult lazy_greedy(const Graph& graph, std::size_t k, const SpreadEvaluator& spread);

/// Monte Carlo estimate of the expected activated count: mean over `samples`
/// cascades drawn from stream `stream` of `seed`.
double monte_carlo_activated(const Graph& graph, std::span<const NodeId> seeds,
                             std::uint64_t samples, std::uint64_t seed, std::uint64_t stream);

/// Offline CELF greedy with Monte Carlo evaluation (`eval_samples` cascades
/// per estimate). The value of the final set is re-estimated on an
/// independent batch. The first sweep over all singletons uses up to `jobs`
/// threads; the result does not depend on `jobs`.
OracleResult offline_greedy(const Graph& graph, std::size_t k, std::uint64_t eval_samples,
                            std::uint64_t seed, unsigned jobs = 1);

/// One line of the benchmark cache: "k mode value node_ids...".
struct BenchmarkRecord {
  std::size_t k = 0;
  std::string mode;
  double value = 0.0;
  std::vector<std::string> seeds;  ///< node labels
};

std::optional<BenchmarkRecord> find_benchmark(const std::string& path, std::size_t k,
                                              const std::string& mode);
void append_benchmark(const std::string& path, const BenchmarkRecord& record);

}  // namespace oimlofa
