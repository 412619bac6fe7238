#include "oimlofa/oimlofa.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "oimlofa/algorithms.hpp"
#include "oimlofa/cascade.hpp"
#include "oimlofa/error.hpp"
#include "oimlofa/graph.hpp"
#include "oimlofa/harness.hpp"
#include "oimlofa/oracle.hpp"

using namespace oimlofa;

struct oim_graph {
  std::shared_ptr<const Graph> graph;
};

struct oim_env {
  std::unique_ptr<CascadeEnvironment> env;
};

struct oim_run {
  RunRecord record;
  std::vector<NodeId> committed;
  std::vector<std::uint64_t> commit_rounds;
};

struct oim_oracle {
  OracleResult result;
};

struct oim_benchmark {
  Benchmark benchmark;
};

namespace {

thread_local std::string last_error;

oim_status fail(oim_status status, const std::string& message) {
  last_error = message;
  return status;
}

oim_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
      return OIM_ERR_INVALID_ARGUMENT;
    case ErrorKind::parse:
      return OIM_ERR_PARSE;
    case ErrorKind::io:
      return OIM_ERR_IO;
    case ErrorKind::budget_exhausted:
      return OIM_ERR_BUDGET_EXHAUSTED;
    case ErrorKind::too_large:
      return OIM_ERR_TOO_LARGE;
  }
  return OIM_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
oim_status guarded(F&& body) {
  try {
    body();
    return OIM_OK;
  } catch (const Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(OIM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(OIM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(OIM_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::invalid_argument, what);
}

std::span<const NodeId> seed_span(const uint32_t* seeds, size_t n) {
  require(n == 0 || seeds != nullptr, "seeds pointer is null");
  return {seeds, n};
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

oim_graph* wrap(Graph g) { return new oim_graph{std::make_shared<const Graph>(std::move(g))}; }

oim_run* wrap(RunRecord rec) {
  auto* run = new oim_run{std::move(rec), {}, {}};
  for (const auto& c : run->record.commits) {
    run->committed.push_back(c.node);
    run->commit_rounds.push_back(c.round);
  }
  return run;
}

std::vector<std::string> split_commas(const char* text) {
  std::vector<std::string> out;
  std::string cur;
  for (const char* p = text; *p; ++p) {
    if (*p == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += *p;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

ExperimentConfig to_config(const oim_experiment_config* c) {
  require(c != nullptr, "config is null");
  ExperimentConfig cfg;
  cfg.graph_path = c->graph_path ? c->graph_path : "";
  cfg.prob_mode = c->prob_mode ? c->prob_mode : "file";
  cfg.k = c->k;
  require(c->n_horizons == 0 || c->horizons != nullptr, "horizons pointer is null");
  cfg.horizons.assign(c->horizons, c->horizons + c->n_horizons);
  cfg.algorithms = split_commas(c->algorithms ? c->algorithms : "");
  cfg.repetitions = c->repetitions;
  cfg.base_seed = c->base_seed;
  cfg.window = c->window;
  cfg.output_dir = c->output_dir ? c->output_dir : "";
  cfg.benchmark = c->benchmark ? c->benchmark : "greedy";
  cfg.eval_samples = c->eval_samples;
  cfg.semantics = parse_gain_semantics(c->mg_semantics ? c->mg_semantics : "diff");
  cfg.stride = c->stride;
  cfg.jobs = c->jobs;
  cfg.record_timing = c->record_timing != 0;
  cfg.cache_path = c->cache_path ? c->cache_path : "";
  return cfg;
}

constexpr uint64_t kDefaultHorizons[] = {20000, 40000, 60000, 80000, 100000};

}  // namespace

extern "C" {

const char* oim_last_error(void) { return last_error.c_str(); }

const char* oim_status_name(oim_status status) {
  switch (status) {
    case OIM_OK:
      return "ok";
    case OIM_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case OIM_ERR_PARSE:
      return "parse error";
    case OIM_ERR_IO:
      return "i/o error";
    case OIM_ERR_BUDGET_EXHAUSTED:
      return "horizon exhausted";
    case OIM_ERR_TOO_LARGE:
      return "instance too large";
    case OIM_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void oim_string_free(char* s) { std::free(s); }

oim_status oim_graph_load(const char* path, const char* prob_mode, oim_graph** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = wrap(load_graph(path, ProbabilityMode::parse(prob_mode ? prob_mode : "file")));
  });
}

oim_status oim_graph_parse(const char* text, const char* prob_mode, oim_graph** out) {
  return guarded([&] {
    require(text && out, "null argument");
    const auto mode = ProbabilityMode::parse(prob_mode ? prob_mode : "file");
    std::istringstream in(text);
    Graph g = parse_edge_list(in, mode.kind == ProbabilityMode::Kind::file
                                      ? std::nullopt
                                      : std::optional<double>(1.0));
    if (mode.kind == ProbabilityMode::Kind::constant) g = with_constant_probability(g, mode.constant);
    if (mode.kind == ProbabilityMode::Kind::weighted_cascade) g = with_weighted_cascade(g);
    *out = wrap(std::move(g));
  });
}

oim_status oim_graph_line(size_t n, double p, oim_graph** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = wrap(make_line_graph(n, p));
  });
}

oim_status oim_graph_star(size_t leaves, double p, oim_graph** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = wrap(make_star_graph(leaves, p));
  });
}

oim_status oim_graph_scale_free(size_t n, size_t attach, double p, uint64_t seed,
                                oim_graph** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = wrap(make_scale_free_graph(n, attach, p, seed));
  });
}

oim_status oim_graph_weighted_cascade(const oim_graph* graph, oim_graph** out) {
  return guarded([&] {
    require(graph && out, "null argument");
    *out = wrap(with_weighted_cascade(*graph->graph));
  });
}

void oim_graph_free(oim_graph* graph) { delete graph; }

size_t oim_graph_node_count(const oim_graph* graph) { return graph ? graph->graph->node_count() : 0; }

size_t oim_graph_edge_count(const oim_graph* graph) { return graph ? graph->graph->edge_count() : 0; }

oim_status oim_graph_find(const oim_graph* graph, const char* label, uint32_t* out) {
  return guarded([&] {
    require(graph && label && out, "null argument");
    auto id = graph->graph->find(label);
    if (!id) throw Error(ErrorKind::invalid_argument, std::string("unknown node '") + label + "'");
    *out = *id;
  });
}

oim_status oim_graph_label(const oim_graph* graph, uint32_t node, char** out) {
  return guarded([&] {
    require(graph && out, "null argument");
    require(node < graph->graph->node_count(), "node out of range");
    *out = dup_string(graph->graph->label(node));
  });
}

oim_status oim_graph_to_text(const oim_graph* graph, char** out) {
  return guarded([&] {
    require(graph && out, "null argument");
    std::ostringstream os;
    write_edge_list(os, *graph->graph);
    *out = dup_string(os.str());
  });
}

oim_status oim_simulate(const oim_graph* graph, const uint32_t* seeds, size_t n_seeds,
                        uint64_t seed, size_t runs, uint64_t* activated_out) {
  return guarded([&] {
    require(graph && (runs == 0 || activated_out), "null argument");
    const auto set = seed_span(seeds, n_seeds);
    CascadeSimulator sim(*graph->graph);
    Rng rng(seed);
    for (size_t i = 0; i < runs; ++i) activated_out[i] = sim.run(set, rng);
  });
}

oim_status oim_env_create(const oim_graph* graph, uint64_t horizon, uint64_t seed, oim_env** out) {
  return guarded([&] {
    require(graph && out, "null argument");
    *out = new oim_env{std::make_unique<CascadeEnvironment>(graph->graph, horizon, seed)};
  });
}

void oim_env_free(oim_env* env) { delete env; }

oim_status oim_env_play(oim_env* env, const uint32_t* seeds, size_t n_seeds, double* reward,
                        size_t* activated) {
  return guarded([&] {
    require(env != nullptr, "null argument");
    const PlayResult r = env->env->play(seed_span(seeds, n_seeds));
    if (reward) *reward = r.reward;
    if (activated) *activated = r.activated_count;
  });
}

oim_status oim_env_mean_of_plays(oim_env* env, const uint32_t* seeds, size_t n_seeds, uint64_t m,
                                 double* out) {
  return guarded([&] {
    require(env && out, "null argument");
    *out = env->env->mean_of_plays(seed_span(seeds, n_seeds), m);
  });
}

uint64_t oim_env_rounds_used(const oim_env* env) { return env ? env->env->rounds_used() : 0; }

uint64_t oim_env_horizon(const oim_env* env) { return env ? env->env->horizon() : 0; }

oim_status oim_compute_m(uint64_t horizon, uint64_t n, uint64_t k, uint64_t* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = compute_m(horizon, n, k);
  });
}

oim_status oim_run_policy(oim_env* env, const char* algorithm, size_t k, const char* mg_semantics,
                          oim_run** out) {
  return guarded([&] {
    require(env && algorithm && out, "null argument");
    const std::string algo(algorithm);
    if (algo == "lofa") {
      LofaOptions opts;
      opts.semantics = parse_gain_semantics(mg_semantics ? mg_semantics : "diff");
      *out = wrap(lofa_run(*env->env, k, opts));
    } else if (algo == "etcg") {
      *out = wrap(etcg_run(*env->env, k));
    } else {
      throw Error(ErrorKind::invalid_argument, "unknown algorithm '" + algo + "'");
    }
  });
}

oim_status oim_run_fixed(oim_env* env, const uint32_t* seeds, size_t n_seeds, oim_run** out) {
  return guarded([&] {
    require(env && out, "null argument");
    *out = wrap(fixed_set_run(*env->env, seed_span(seeds, n_seeds)));
  });
}

void oim_run_free(oim_run* run) { delete run; }

uint64_t oim_run_m(const oim_run* run) { return run ? run->record.m : 0; }

uint64_t oim_run_exploration_end(const oim_run* run) {
  return run ? run->record.exploration_end : 0;
}

int oim_run_truncated(const oim_run* run) { return run && run->record.truncated ? 1 : 0; }

void oim_run_tally(const oim_run* run, oim_play_tally* out) {
  if (!run || !out) return;
  out->init = run->record.tally.init;
  out->recompute = run->record.tally.recompute;
  out->shortcut = run->record.tally.shortcut;
  out->exploit = run->record.tally.exploit;
}

const double* oim_run_rewards(const oim_run* run, size_t* len) {
  if (len) *len = run ? run->record.rewards.size() : 0;
  return run ? run->record.rewards.data() : nullptr;
}

const uint32_t* oim_run_committed(const oim_run* run, size_t* len) {
  if (len) *len = run ? run->committed.size() : 0;
  return run ? run->committed.data() : nullptr;
}

const uint64_t* oim_run_commit_rounds(const oim_run* run, size_t* len) {
  if (len) *len = run ? run->commit_rounds.size() : 0;
  return run ? run->commit_rounds.data() : nullptr;
}

oim_status oim_exact_spread(const oim_graph* graph, const uint32_t* seeds, size_t n_seeds,
                            double* out) {
  return guarded([&] {
    require(graph && out, "null argument");
    *out = exact_spread(*graph->graph, seed_span(seeds, n_seeds));
  });
}

oim_status oim_brute_force_best(const oim_graph* graph, size_t k, oim_oracle** out) {
  return guarded([&] {
    require(graph && out, "null argument");
    *out = new oim_oracle{brute_force_best(*graph->graph, k)};
  });
}

oim_status oim_offline_greedy(const oim_graph* graph, size_t k, uint64_t eval_samples,
                              uint64_t seed, unsigned jobs, oim_oracle** out) {
  return guarded([&] {
    require(graph && out, "null argument");
    *out = new oim_oracle{offline_greedy(*graph->graph, k, eval_samples, seed, jobs)};
  });
}

void oim_oracle_free(oim_oracle* result) { delete result; }

double oim_oracle_value(const oim_oracle* result) {
  return result ? result->result.estimated_value : 0.0;
}

uint64_t oim_oracle_samples(const oim_oracle* result) {
  return result && result->result.samples_used ? *result->result.samples_used : 0;
}

const uint32_t* oim_oracle_seeds(const oim_oracle* result, size_t* len) {
  if (len) *len = result ? result->result.seed_set.size() : 0;
  return result ? result->result.seed_set.data() : nullptr;
}

const double* oim_oracle_gains(const oim_oracle* result, size_t* len) {
  if (len) *len = result ? result->result.per_step_gains.size() : 0;
  return result ? result->result.per_step_gains.data() : nullptr;
}

void oim_experiment_config_defaults(oim_experiment_config* c) {
  if (!c) return;
  c->graph_path = "";
  c->prob_mode = "file";
  c->k = 0;
  c->horizons = kDefaultHorizons;
  c->n_horizons = sizeof kDefaultHorizons / sizeof kDefaultHorizons[0];
  c->algorithms = "lofa,etcg";
  c->repetitions = 10;
  c->base_seed = 0;
  c->window = 100;
  c->output_dir = "results";
  c->benchmark = "greedy";
  c->eval_samples = 10000;
  c->mg_semantics = "diff";
  c->stride = 1;
  c->jobs = 1;
  c->record_timing = 0;
  c->cache_path = "";
}

oim_status oim_benchmark_compute(const oim_graph* graph, const oim_experiment_config* config,
                                 oim_benchmark** out) {
  return guarded([&] {
    require(graph && out, "null argument");
    *out = new oim_benchmark{compute_benchmark(*graph->graph, to_config(config))};
  });
}

void oim_benchmark_free(oim_benchmark* benchmark) { delete benchmark; }

double oim_benchmark_value(const oim_benchmark* b) { return b ? b->benchmark.value : 0.0; }

double oim_benchmark_greedy_value(const oim_benchmark* b) {
  return b ? b->benchmark.greedy_value : 0.0;
}

const uint32_t* oim_benchmark_greedy_seeds(const oim_benchmark* b, size_t* len) {
  if (len) *len = b ? b->benchmark.greedy_seeds.size() : 0;
  return b ? b->benchmark.greedy_seeds.data() : nullptr;
}

oim_status oim_run_experiment(const oim_graph* graph, const oim_experiment_config* config,
                              const oim_benchmark* benchmark) {
  return guarded([&] {
    require(graph && benchmark, "null argument");
    run_experiment(to_config(config), graph->graph, benchmark->benchmark);
  });
}

oim_status oim_moving_average(const double* series, size_t len, size_t window, double* out) {
  return guarded([&] {
    require((series && out) || len == 0, "null argument");
    const auto r = moving_average({series, len}, window);
    std::copy(r.begin(), r.end(), out);
  });
}

oim_status oim_cumulative_regret(const double* rewards, size_t len, double benchmark_value,
                                 double* out) {
  return guarded([&] {
    require((rewards && out) || len == 0, "null argument");
    require(benchmark_value >= 0.0 && benchmark_value <= 1.0, "benchmark value outside [0,1]");
    const auto r = cumulative_regret({rewards, len}, benchmark_value);
    std::copy(r.begin(), r.end(), out);
  });
}

}  // extern "C"
