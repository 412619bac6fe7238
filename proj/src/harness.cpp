#include "oimlofa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

#include "oimlofa/error.hpp"
#include "oimlofa/oracle.hpp"

namespace oimlofa {

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& why) { return Error(ErrorKind::invalid_argument, why); };
  if (k == 0) throw bad("k must be positive");
  if (horizons.empty()) throw bad("at least one horizon is required");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] < 2) throw bad("horizons must be >= 2");
    if (i > 0 && horizons[i] <= horizons[i - 1]) throw bad("horizons must be strictly increasing");
  }
  if (algorithms.empty()) throw bad("at least one algorithm is required");
  for (const auto& a : algorithms) {
    if (a != "lofa" && a != "etcg" && a != "greedy-fixed") {
      throw bad("unknown algorithm '" + a + "' (expected lofa, etcg, greedy-fixed)");
    }
  }
  if (repetitions < 1) throw bad("repetitions must be >= 1");
  if (window < 1) throw bad("window must be >= 1");
  if (stride < 1) throw bad("stride must be >= 1");
  if (eval_samples < 1) throw bad("eval_samples must be >= 1");
  if (benchmark != "greedy" && benchmark != "optimal") {
    throw bad("benchmark must be greedy or optimal");
  }
  if (output_dir.empty()) throw bad("output directory is required");
  ProbabilityMode::parse(prob_mode);
}

std::vector<double> cumulative_regret(std::span<const double> rewards, double benchmark_value) {
  std::vector<double> out;
  out.reserve(rewards.size());
  double reward_sum = 0.0;
  for (std::size_t t = 0; t < rewards.size(); ++t) {
    reward_sum += rewards[t];
    out.push_back(static_cast<double>(t + 1) * benchmark_value - reward_sum);
  }
  return out;
}

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
  if (window == 0) throw Error(ErrorKind::invalid_argument, "window must be >= 1");
  std::vector<double> out;
  out.reserve(series.size());
  // Each mean is summed directly over its window so values do not depend on
  // accumulated rounding from earlier positions.
  for (std::size_t t = 0; t < series.size(); ++t) {
    const std::size_t lo = t + 1 >= window ? t + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t s = lo; s <= t; ++s) sum += series[s];
    out.push_back(sum / static_cast<double>(t + 1 - lo));
  }
  return out;
}

std::vector<AggregateRow> aggregate(std::span<const RunSummary> summaries) {
  std::vector<AggregateRow> rows;
  std::vector<std::vector<double>> groups;
  for (const auto& s : summaries) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const AggregateRow& r) {
      return r.algorithm == s.algorithm && r.k == s.k && r.horizon == s.horizon;
    });
    if (it == rows.end()) {
      rows.push_back({s.algorithm, s.k, s.horizon, 0.0, 0.0, 0});
      groups.emplace_back();
      it = rows.end() - 1;
    }
    groups[static_cast<std::size_t>(it - rows.begin())].push_back(s.regret);
  }
  for (std::size_t g = 0; g < rows.size(); ++g) {
    // Sorted summation makes the mean independent of input order.
    auto& v = groups[g];
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    double sq = 0.0;
    for (double x : v) sq += (x - mean) * (x - mean);
    rows[g].regret_mean = mean;
    rows[g].regret_std = v.size() > 1 ? std::sqrt(sq / static_cast<double>(v.size() - 1)) : 0.0;
    rows[g].reps = v.size();
  }
  return rows;
}

std::uint64_t cell_seed(std::uint64_t base_seed, const std::string& algorithm,
                        std::uint64_t horizon, std::size_t rep) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (unsigned char c : algorithm) mix(c);
  mix(0);
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(horizon >> (8 * i)));
  const auto r = static_cast<std::uint64_t>(rep);
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(r >> (8 * i)));
  return base_seed ^ h;
}

std::string make_run_id(const std::string& algorithm, std::size_t k, std::uint64_t horizon,
                        std::size_t rep) {
  return algorithm + "-k" + std::to_string(k) + "-T" + std::to_string(horizon) + "-r" +
         std::to_string(rep);
}

RunRecord run_policy(std::shared_ptr<const Graph> graph, const std::string& algorithm,
                     std::size_t k, std::uint64_t horizon, std::uint64_t seed,
                     GainSemantics semantics, const Benchmark& benchmark) {
  CascadeEnvironment env(std::move(graph), horizon, seed);
  if (algorithm == "lofa") return LofaPolicy({semantics, std::nullopt}).run(env, k);
  if (algorithm == "etcg") return EtcgPolicy().run(env, k);
  if (algorithm == "greedy-fixed") return FixedSetPolicy(benchmark.greedy_seeds).run(env, k);
  throw Error(ErrorKind::invalid_argument, "unknown algorithm '" + algorithm + "'");
}

namespace {

std::string join_labels(const Graph& graph, std::span<const NodeId> seeds) {
  std::string out;
  for (NodeId u : seeds) {
    if (!out.empty()) out += ' ';
    out += graph.label(u);
  }
  return out;
}

std::string greedy_cache_mode(const ExperimentConfig& config) {
  return config.prob_mode + ",greedy,samples=" + std::to_string(config.eval_samples) +
         ",seed=" + std::to_string(config.base_seed);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
  return out;
}

void write_rounds(const std::filesystem::path& path, const std::string& run_id,
                  const RunRecord& rec, std::size_t rep, std::uint64_t stride) {
  auto out = open_output(path);
  out << "run_id,algorithm,k,T,rep,t,reward,activated\n";
  const std::string prefix = run_id + ',' + rec.algorithm + ',' + std::to_string(rec.k) + ',' +
                             std::to_string(rec.horizon) + ',' + std::to_string(rep) + ',';
  for (std::size_t t = 0; t < rec.rewards.size(); t += stride) {
    out << prefix << t << ',' << format_real(rec.rewards[t]) << ',' << rec.activated[t] << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
}

}  // namespace

Benchmark compute_benchmark(const Graph& graph, const ExperimentConfig& config) {
  if (config.k > graph.node_count()) {
    throw Error(ErrorKind::invalid_argument, "k = " + std::to_string(config.k) +
                                                 " exceeds node count " +
                                                 std::to_string(graph.node_count()));
  }
  Benchmark b;
  b.kind = config.benchmark;

  const std::string mode = greedy_cache_mode(config);
  std::optional<BenchmarkRecord> cached;
  if (!config.cache_path.empty()) cached = find_benchmark(config.cache_path, config.k, mode);
  if (cached) {
    for (const auto& label : cached->seeds) {
      auto id = graph.find(label);
      if (!id) throw Error(ErrorKind::parse, "benchmark cache names unknown node '" + label + "'");
      b.greedy_seeds.push_back(*id);
    }
    b.greedy_value = cached->value;
  } else {
    const OracleResult greedy =
        offline_greedy(graph, config.k, config.eval_samples, config.base_seed, config.jobs);
    b.greedy_seeds = greedy.seed_set;
    b.greedy_value = greedy.estimated_value;
    if (!config.cache_path.empty()) {
      BenchmarkRecord rec{config.k, mode, b.greedy_value, {}};
      for (NodeId u : b.greedy_seeds) rec.seeds.push_back(graph.label(u));
      append_benchmark(config.cache_path, rec);
    }
  }

  if (config.benchmark == "optimal") {
    const OracleResult best = brute_force_best(graph, config.k);
    b.value = (1.0 - std::exp(-1.0)) * best.estimated_value;
  } else {
    b.value = b.greedy_value;
  }
  return b;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::shared_ptr<const Graph> graph, const Benchmark& benchmark) {
  config.validate();
  if (config.k > graph->node_count()) {
    throw Error(ErrorKind::invalid_argument, "k = " + std::to_string(config.k) +
                                                 " exceeds node count " +
                                                 std::to_string(graph->node_count()));
  }
  const std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::io, "cannot create output directory '" + config.output_dir + "'");
  }

  struct Cell {
    std::string algorithm;
    std::uint64_t horizon;
    std::size_t rep;
  };
  std::vector<Cell> cells;
  for (const auto& a : config.algorithms) {
    for (std::uint64_t t : config.horizons) {
      for (std::size_t r = 0; r < config.repetitions; ++r) cells.push_back({a, t, r});
    }
  }

  ExperimentResult result;
  result.summaries.resize(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      try {
        const auto start = std::chrono::steady_clock::now();
        const std::uint64_t seed = cell_seed(config.base_seed, c.algorithm, c.horizon, c.rep);
        const RunRecord rec =
            run_policy(graph, c.algorithm, config.k, c.horizon, seed, config.semantics, benchmark);
        const auto stop = std::chrono::steady_clock::now();

        RunSummary& s = result.summaries[i];
        s.run_id = make_run_id(c.algorithm, config.k, c.horizon, c.rep);
        s.algorithm = c.algorithm;
        s.k = config.k;
        s.horizon = c.horizon;
        s.rep = c.rep;
        s.cumulative_reward = rec.cumulative_reward();
        s.benchmark_value = benchmark.value;
        s.regret = static_cast<double>(c.horizon) * benchmark.value - s.cumulative_reward;
        s.seconds =
            config.record_timing ? std::chrono::duration<double>(stop - start).count() : 0.0;
        s.seeds = rec.committed();
        s.exploration_end = rec.exploration_end;
        write_rounds(dir / ("rounds_" + s.run_id + ".csv"), s.run_id, rec, c.rep, config.stride);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1u, config.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  {
    auto out = open_output(dir / "summary.csv");
    out << "run_id,algorithm,k,T,rep,cumulative_reward,regret,benchmark_value,seconds,seeds\n";
    for (const auto& s : result.summaries) {
      out << s.run_id << ',' << s.algorithm << ',' << s.k << ',' << s.horizon << ',' << s.rep
          << ',' << format_real(s.cumulative_reward) << ',' << format_real(s.regret) << ','
          << format_real(s.benchmark_value) << ',' << format_real(s.seconds) << ','
          << join_labels(*graph, s.seeds) << '\n';
    }
  }

  result.aggregates = aggregate(result.summaries);
  {
    auto out = open_output(dir / "aggregate.csv");
    out << "algorithm,k,T,regret_mean,regret_std,reps\n";
    for (const auto& a : result.aggregates) {
      out << a.algorithm << ',' << a.k << ',' << a.horizon << ',' << format_real(a.regret_mean)
          << ',' << format_real(a.regret_std) << ',' << a.reps << '\n';
    }
  }

  {
    auto out = open_output(dir / "manifest.txt");
    auto list = [](const auto& xs) {
      std::string s;
      for (const auto& x : xs) {
        if (!s.empty()) s += ',';
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, std::string>) {
          s += x;
        } else {
          s += std::to_string(x);
        }
      }
      return s;
    };
    char value[32];
    std::snprintf(value, sizeof value, "%.17g", benchmark.value);
    char greedy_value[32];
    std::snprintf(greedy_value, sizeof greedy_value, "%.17g", benchmark.greedy_value);
    out << "graph=" << config.graph_path << '\n'
        << "prob_mode=" << config.prob_mode << '\n'
        << "nodes=" << graph->node_count() << '\n'
        << "edges=" << graph->edge_count() << '\n'
        << "k=" << config.k << '\n'
        << "horizons=" << list(config.horizons) << '\n'
        << "algos=" << list(config.algorithms) << '\n'
        << "reps=" << config.repetitions << '\n'
        << "seed=" << config.base_seed << '\n'
        << "window=" << config.window << '\n'
        << "benchmark=" << config.benchmark << '\n'
        << "samples=" << config.eval_samples << '\n'
        << "mg_semantics=" << to_string(config.semantics) << '\n'
        << "stride=" << config.stride << '\n'
        << "jobs=" << config.jobs << '\n'
        << "timing=" << (config.record_timing ? 1 : 0) << '\n'
        << "benchmark_cache=" << config.cache_path << '\n'
        << "benchmark_value=" << value << '\n'
        << "greedy_value=" << greedy_value << '\n'
        << "greedy_seeds=" << join_labels(*graph, benchmark.greedy_seeds) << '\n';
    for (std::uint64_t t : config.horizons) {
      out << "m.T" << t << '=' << compute_m(t, graph->node_count(), config.k) << '\n';
    }
  }
  return result;
}

}  // namespace oimlofa
