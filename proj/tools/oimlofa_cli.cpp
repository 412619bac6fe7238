// Command-line front end. Talks to the library only through the C API.

#include <cstdint>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oimlofa/oimlofa.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Carries a C API failure out to main().
struct ApiFailure {
  oim_status status;
  std::string message;
};

void check(oim_status status) {
  if (status != OIM_OK) throw ApiFailure{status, oim_last_error()};
}

struct GraphDeleter {
  void operator()(oim_graph* g) const { oim_graph_free(g); }
};
using GraphPtr = std::unique_ptr<oim_graph, GraphDeleter>;

GraphPtr load(const std::string& path, const std::string& mode) {
  oim_graph* g = nullptr;
  check(oim_graph_load(path.c_str(), mode.c_str(), &g));
  return GraphPtr(g);
}

std::string label_of(const oim_graph* g, uint32_t node) {
  char* s = nullptr;
  check(oim_graph_label(g, node, &s));
  std::string out(s);
  oim_string_free(s);
  return out;
}

std::string join_labels(const oim_graph* g, const uint32_t* ids, size_t n) {
  std::string out;
  for (size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += label_of(g, ids[i]);
  }
  return out;
}

// Shortest text that reads back to the same double.
std::string real_text(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<uint64_t> parse_horizons(const std::string& text) {
  std::vector<uint64_t> out;
  for (const auto& item : split(text, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty()) {
      throw CLI::ValidationError("--horizons", "not an integer: '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string cache_path_for(const std::string& flag, const std::string& graph) {
  if (flag == "none") return "";
  if (!flag.empty()) return flag;
  return graph + ".benchmark";
}

void write_manifest(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ApiFailure{OIM_ERR_IO, "cannot write manifest '" + path + "'"};
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

struct RunFlags {
  std::string graph;
  size_t k = 0;
  std::string prob_mode = "file";
  std::string horizons = "20000,40000,60000,80000,100000";
  std::string algos = "lofa,etcg";
  size_t reps = 10;
  uint64_t seed = 0;
  std::string out = "results";
  size_t window = 100;
  std::string benchmark = "greedy";
  uint64_t samples = 10000;
  std::string mg_semantics = "diff";
  uint64_t stride = 1;
  unsigned jobs = 1;
  bool timing = false;
  std::string cache;
};

void cmd_run(const RunFlags& f) {
  GraphPtr g = load(f.graph, f.prob_mode);
  const auto horizons = parse_horizons(f.horizons);
  const std::string cache = cache_path_for(f.cache, f.graph);

  oim_experiment_config cfg;
  oim_experiment_config_defaults(&cfg);
  cfg.graph_path = f.graph.c_str();
  cfg.prob_mode = f.prob_mode.c_str();
  cfg.k = f.k;
  cfg.horizons = horizons.data();
  cfg.n_horizons = horizons.size();
  cfg.algorithms = f.algos.c_str();
  cfg.repetitions = f.reps;
  cfg.base_seed = f.seed;
  cfg.window = f.window;
  cfg.output_dir = f.out.c_str();
  cfg.benchmark = f.benchmark.c_str();
  cfg.eval_samples = f.samples;
  cfg.mg_semantics = f.mg_semantics.c_str();
  cfg.stride = f.stride;
  cfg.jobs = f.jobs;
  cfg.record_timing = f.timing ? 1 : 0;
  cfg.cache_path = cache.c_str();

  oim_benchmark* bench = nullptr;
  check(oim_benchmark_compute(g.get(), &cfg, &bench));
  std::unique_ptr<oim_benchmark, void (*)(oim_benchmark*)> owned(bench, oim_benchmark_free);
  check(oim_run_experiment(g.get(), &cfg, bench));
  std::cout << "benchmark_value=" << real_text(oim_benchmark_value(bench)) << '\n'
            << "wrote " << (std::filesystem::path(f.out) / "summary.csv").string()
            << ", aggregate.csv, manifest.txt\n";
}

struct OracleFlags {
  std::string graph;
  size_t k = 0;
  std::string prob_mode = "file";
  uint64_t samples = 10000;
  uint64_t seed = 0;
  unsigned jobs = 1;
  std::string cache;
};

void cmd_oracle(const OracleFlags& f) {
  GraphPtr g = load(f.graph, f.prob_mode);
  const std::string cache = cache_path_for(f.cache, f.graph);

  oim_experiment_config cfg;
  oim_experiment_config_defaults(&cfg);
  cfg.graph_path = f.graph.c_str();
  cfg.prob_mode = f.prob_mode.c_str();
  cfg.k = f.k;
  cfg.base_seed = f.seed;
  cfg.eval_samples = f.samples;
  cfg.jobs = f.jobs;
  cfg.cache_path = cache.c_str();

  oim_benchmark* bench = nullptr;
  check(oim_benchmark_compute(g.get(), &cfg, &bench));
  std::unique_ptr<oim_benchmark, void (*)(oim_benchmark*)> owned(bench, oim_benchmark_free);
  size_t n = 0;
  const uint32_t* seeds = oim_benchmark_greedy_seeds(bench, &n);

  std::vector<std::pair<std::string, std::string>> manifest{
      {"subcommand", "oracle"},
      {"graph", f.graph},
      {"prob_mode", f.prob_mode},
      {"k", std::to_string(f.k)},
      {"samples", std::to_string(f.samples)},
      {"seed", std::to_string(f.seed)},
      {"jobs", std::to_string(f.jobs)},
      {"benchmark_cache", cache},
      {"greedy_value", real_text(oim_benchmark_greedy_value(bench))},
      {"greedy_seeds", join_labels(g.get(), seeds, n)},
  };
  std::cout << "greedy_value=" << real_text(oim_benchmark_greedy_value(bench)) << '\n'
            << "greedy_seeds=" << join_labels(g.get(), seeds, n) << '\n';

  oim_oracle* best = nullptr;
  const oim_status st = oim_brute_force_best(g.get(), f.k, &best);
  if (st == OIM_OK) {
    size_t bn = 0;
    const uint32_t* bs = oim_oracle_seeds(best, &bn);
    const std::string value = real_text(oim_oracle_value(best));
    std::cout << "optimal_value=" << value << '\n'
              << "optimal_seeds=" << join_labels(g.get(), bs, bn) << '\n';
    manifest.emplace_back("optimal_value", value);
    manifest.emplace_back("optimal_seeds", join_labels(g.get(), bs, bn));
    oim_oracle_free(best);
  } else if (st == OIM_ERR_TOO_LARGE) {
    std::cout << "optimal=skipped (" << oim_last_error() << ")\n";
    manifest.emplace_back("optimal", "skipped");
  } else {
    check(st);
  }
  if (!cache.empty()) write_manifest(cache + ".manifest", manifest);
}

struct SimulateFlags {
  std::string graph;
  std::string prob_mode = "file";
  std::string seeds;
  size_t runs = 1000;
  uint64_t seed = 0;
  std::string out;
};

void cmd_simulate(const SimulateFlags& f) {
  GraphPtr g = load(f.graph, f.prob_mode);
  std::vector<uint32_t> ids;
  for (const auto& label : split(f.seeds, ',')) {
    uint32_t id = 0;
    check(oim_graph_find(g.get(), label.c_str(), &id));
    ids.push_back(id);
  }
  std::vector<uint64_t> counts(f.runs);
  check(oim_simulate(g.get(), ids.data(), ids.size(), f.seed, f.runs, counts.data()));

  const double n = static_cast<double>(oim_graph_node_count(g.get()));
  double total = 0.0;
  std::ostringstream csv;
  csv << "run,activated,reward\n";
  for (size_t i = 0; i < counts.size(); ++i) {
    total += static_cast<double>(counts[i]);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(counts[i]) / n);
    csv << i << ',' << counts[i] << ',' << buf << '\n';
  }
  const double mean = counts.empty() ? 0.0 : total / static_cast<double>(counts.size());

  if (f.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(f.out, std::ios::binary | std::ios::trunc);
    if (!out) throw ApiFailure{OIM_ERR_IO, "cannot write '" + f.out + "'"};
    out << csv.str();
    write_manifest(f.out + ".manifest", {{"subcommand", "simulate"},
                                         {"graph", f.graph},
                                         {"prob_mode", f.prob_mode},
                                         {"seeds", f.seeds},
                                         {"runs", std::to_string(f.runs)},
                                         {"seed", std::to_string(f.seed)}});
  }
  std::cerr << "mean_activated=" << real_text(mean) << " mean_reward=" << real_text(n > 0 ? mean / n : 0)
            << '\n';
}

struct GenFlags {
  std::string kind;
  size_t n = 10;
  size_t leaves = 4;
  size_t attach = 2;
  double p = 0.1;
  uint64_t seed = 0;
  bool wc = false;
  std::string out;
};

void cmd_gen_graph(const GenFlags& f) {
  oim_graph* raw = nullptr;
  if (f.kind == "line") {
    check(oim_graph_line(f.n, f.p, &raw));
  } else if (f.kind == "star") {
    check(oim_graph_star(f.leaves, f.p, &raw));
  } else {
    check(oim_graph_scale_free(f.n, f.attach, f.p, f.seed, &raw));
  }
  GraphPtr g(raw);
  if (f.wc) {
    oim_graph* wc = nullptr;
    check(oim_graph_weighted_cascade(g.get(), &wc));
    g.reset(wc);
  }
  char* text = nullptr;
  check(oim_graph_to_text(g.get(), &text));
  std::string body(text);
  oim_string_free(text);

  if (f.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(f.out, std::ios::binary | std::ios::trunc);
  if (!out) throw ApiFailure{OIM_ERR_IO, "cannot write '" + f.out + "'"};
  out << body;
  write_manifest(f.out + ".manifest", {{"subcommand", "gen-graph"},
                                       {"kind", f.kind},
                                       {"n", std::to_string(f.n)},
                                       {"leaves", std::to_string(f.leaves)},
                                       {"attach", std::to_string(f.attach)},
                                       {"p", real_text(f.p)},
                                       {"seed", std::to_string(f.seed)},
                                       {"wc", f.wc ? "1" : "0"}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online influence maximization under full-bandit feedback"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Run a horizon sweep and write CSVs");
  run_cmd->add_option("--graph", run.graph, "Edge-list file")->required();
  run_cmd->add_option("--k", run.k, "Seed-set budget")->required()->check(CLI::PositiveNumber);
  run_cmd->add_option("--prob-mode", run.prob_mode, "file | const:<p> | wc")->capture_default_str();
  run_cmd->add_option("--horizons", run.horizons, "Comma-separated horizons")->capture_default_str();
  run_cmd->add_option("--algos", run.algos, "Comma list of lofa, etcg, greedy-fixed")
      ->capture_default_str();
  run_cmd->add_option("--reps", run.reps, "Repetitions per horizon")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Base seed")->capture_default_str();
  run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--window", run.window, "Moving-average window")->capture_default_str();
  run_cmd->add_option("--benchmark", run.benchmark, "greedy | optimal")
      ->check(CLI::IsMember({"greedy", "optimal"}))
      ->capture_default_str();
  run_cmd->add_option("--samples", run.samples, "Cascades per offline estimate")
      ->capture_default_str();
  run_cmd->add_option("--mg-semantics", run.mg_semantics, "diff | value")
      ->check(CLI::IsMember({"diff", "value"}))
      ->capture_default_str();
  run_cmd->add_option("--stride", run.stride, "Keep every n-th per-round row")
      ->capture_default_str();
  run_cmd->add_option("--jobs", run.jobs, "Worker threads")->capture_default_str();
  run_cmd->add_flag("--timing", run.timing, "Record wall-clock seconds (breaks byte reproducibility)");
  run_cmd->add_option("--cache", run.cache,
                      "Benchmark cache file (default <graph>.benchmark, 'none' disables)");

  OracleFlags oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Compute and cache the offline benchmark");
  oracle_cmd->add_option("--graph", oracle.graph, "Edge-list file")->required();
  oracle_cmd->add_option("--k", oracle.k, "Seed-set budget")->required()->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--prob-mode", oracle.prob_mode, "file | const:<p> | wc")
      ->capture_default_str();
  oracle_cmd->add_option("--samples", oracle.samples, "Cascades per estimate")->capture_default_str();
  oracle_cmd->add_option("--seed", oracle.seed, "Seed")->capture_default_str();
  oracle_cmd->add_option("--jobs", oracle.jobs, "Worker threads")->capture_default_str();
  oracle_cmd->add_option("--cache", oracle.cache,
                         "Benchmark cache file (default <graph>.benchmark, 'none' disables)");

  SimulateFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run raw cascades from a seed set");
  sim_cmd->add_option("--graph", sim.graph, "Edge-list file")->required();
  sim_cmd->add_option("--prob-mode", sim.prob_mode, "file | const:<p> | wc")->capture_default_str();
  sim_cmd->add_option("--seeds", sim.seeds, "Comma-separated node labels")->required();
  sim_cmd->add_option("--runs", sim.runs, "Number of cascades")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Generator seed")->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "CSV output file (default stdout)");

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen-graph", "Emit a fixture graph as an edge list");
  gen_cmd->add_option("kind", gen.kind, "line | star | scale-free")
      ->required()
      ->check(CLI::IsMember({"line", "star", "scale-free"}));
  gen_cmd->add_option("--n", gen.n, "Node count (line, scale-free)")->capture_default_str();
  gen_cmd->add_option("--leaves", gen.leaves, "Leaf count (star)")->capture_default_str();
  gen_cmd->add_option("--attach", gen.attach, "Links per new node (scale-free)")
      ->capture_default_str();
  gen_cmd->add_option("--p", gen.p, "Edge probability")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed (scale-free)")->capture_default_str();
  gen_cmd->add_flag("--wc", gen.wc, "Assign weighted-cascade probabilities");
  gen_cmd->add_option("--out", gen.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run_cmd) cmd_run(run);
    if (*oracle_cmd) cmd_oracle(oracle);
    if (*sim_cmd) cmd_simulate(sim);
    if (*gen_cmd) cmd_gen_graph(gen);
  } catch (const ApiFailure& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.status == OIM_ERR_INVALID_ARGUMENT ? kExitUsage : kExitRuntime;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
