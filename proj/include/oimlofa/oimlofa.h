/*
 * oimlofa C API: online influence maximization under full-bandit feedback.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Functions return an oim_status; on failure
 * oim_last_error() describes the problem (thread-local, valid until the next
 * failing call on the same thread). Node ids are dense indices in
 * [0, node_count).
 */
#ifndef OIMLOFA_H
#define OIMLOFA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define OIM_API __declspec(dllexport)
#else
#define OIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum oim_status {
  OIM_OK = 0,
  OIM_ERR_INVALID_ARGUMENT = 1,
  OIM_ERR_PARSE = 2,
  OIM_ERR_IO = 3,
  OIM_ERR_BUDGET_EXHAUSTED = 4,
  OIM_ERR_TOO_LARGE = 5,
  OIM_ERR_INTERNAL = 6
} oim_status;

typedef struct oim_graph oim_graph;
typedef struct oim_env oim_env;
typedef struct oim_run oim_run;
typedef struct oim_oracle oim_oracle;
typedef struct oim_benchmark oim_benchmark;

OIM_API const char* oim_last_error(void);
OIM_API const char* oim_status_name(oim_status status);
OIM_API void oim_string_free(char* s);

/* Graphs */

/* prob_mode: "file", "const:<p>" or "wc" (p = 1 / in-degree of the target). */
OIM_API oim_status oim_graph_load(const char* path, const char* prob_mode, oim_graph** out);
OIM_API oim_status oim_graph_parse(const char* text, const char* prob_mode, oim_graph** out);
OIM_API oim_status oim_graph_line(size_t n, double p, oim_graph** out);
OIM_API oim_status oim_graph_star(size_t leaves, double p, oim_graph** out);
OIM_API oim_status oim_graph_scale_free(size_t n, size_t attach, double p, uint64_t seed,
                                        oim_graph** out);
OIM_API oim_status oim_graph_weighted_cascade(const oim_graph* graph, oim_graph** out);
OIM_API void oim_graph_free(oim_graph* graph);
OIM_API size_t oim_graph_node_count(const oim_graph* graph);
OIM_API size_t oim_graph_edge_count(const oim_graph* graph);
/* Dense id of an original node label. */
OIM_API oim_status oim_graph_find(const oim_graph* graph, const char* label, uint32_t* out);
/* Original label of a node; release with oim_string_free. */
OIM_API oim_status oim_graph_label(const oim_graph* graph, uint32_t node, char** out);
/* Edge-list text "src dst prob" per line; release with oim_string_free. */
OIM_API oim_status oim_graph_to_text(const oim_graph* graph, char** out);

/* Cascades and the bandit environment */

/* Runs `runs` independent cascades from `seeds` with one generator seeded by
 * `seed`; writes each final activated count to activated_out[runs]. */
OIM_API oim_status oim_simulate(const oim_graph* graph, const uint32_t* seeds, size_t n_seeds,
                                uint64_t seed, size_t runs, uint64_t* activated_out);
OIM_API oim_status oim_env_create(const oim_graph* graph, uint64_t horizon, uint64_t seed,
                                  oim_env** out);
OIM_API void oim_env_free(oim_env* env);
OIM_API oim_status oim_env_play(oim_env* env, const uint32_t* seeds, size_t n_seeds,
                                double* reward, size_t* activated);
OIM_API oim_status oim_env_mean_of_plays(oim_env* env, const uint32_t* seeds, size_t n_seeds,
                                         uint64_t m, double* out);
OIM_API uint64_t oim_env_rounds_used(const oim_env* env);
OIM_API uint64_t oim_env_horizon(const oim_env* env);

/* Policies */

typedef struct oim_play_tally {
  uint64_t init;
  uint64_t recompute;
  uint64_t shortcut; /* zero-cost re-flags, not plays */
  uint64_t exploit;
} oim_play_tally;

OIM_API oim_status oim_compute_m(uint64_t horizon, uint64_t n, uint64_t k, uint64_t* out);
/* algorithm: "lofa" or "etcg"; mg_semantics: "diff" or "value" (lofa only,
 * NULL means "diff"). Consumes the environment's remaining rounds. */
OIM_API oim_status oim_run_policy(oim_env* env, const char* algorithm, size_t k,
                                  const char* mg_semantics, oim_run** out);
/* Plays a fixed seed set for the whole horizon. */
OIM_API oim_status oim_run_fixed(oim_env* env, const uint32_t* seeds, size_t n_seeds,
                                 oim_run** out);
OIM_API void oim_run_free(oim_run* run);
OIM_API uint64_t oim_run_m(const oim_run* run);
OIM_API uint64_t oim_run_exploration_end(const oim_run* run);
OIM_API int oim_run_truncated(const oim_run* run);
OIM_API void oim_run_tally(const oim_run* run, oim_play_tally* out);
OIM_API const double* oim_run_rewards(const oim_run* run, size_t* len);
OIM_API const uint32_t* oim_run_committed(const oim_run* run, size_t* len);
OIM_API const uint64_t* oim_run_commit_rounds(const oim_run* run, size_t* len);

/* Oracles */

OIM_API oim_status oim_exact_spread(const oim_graph* graph, const uint32_t* seeds, size_t n_seeds,
                                    double* out);
OIM_API oim_status oim_brute_force_best(const oim_graph* graph, size_t k, oim_oracle** out);
OIM_API oim_status oim_offline_greedy(const oim_graph* graph, size_t k, uint64_t eval_samples,
                                      uint64_t seed, unsigned jobs, oim_oracle** out);
OIM_API void oim_oracle_free(oim_oracle* result);
OIM_API double oim_oracle_value(const oim_oracle* result);
/* 0 when the value is exact. */
OIM_API uint64_t oim_oracle_samples(const oim_oracle* result);
OIM_API const uint32_t* oim_oracle_seeds(const oim_oracle* result, size_t* len);
OIM_API const double* oim_oracle_gains(const oim_oracle* result, size_t* len);

/* Experiments */

typedef struct oim_experiment_config {
  const char* graph_path;   /* recorded in the manifest */
  const char* prob_mode;    /* recorded in the manifest and the cache key */
  size_t k;
  const uint64_t* horizons; /* strictly increasing */
  size_t n_horizons;
  const char* algorithms;   /* comma separated: lofa, etcg, greedy-fixed */
  size_t repetitions;
  uint64_t base_seed;
  size_t window;
  const char* output_dir;
  const char* benchmark;    /* "greedy" or "optimal" */
  uint64_t eval_samples;
  const char* mg_semantics; /* "diff" or "value" */
  uint64_t stride;
  unsigned jobs;
  int record_timing;
  const char* cache_path;   /* NULL or "" disables the benchmark cache */
} oim_experiment_config;

/* Fills every field with its default. horizons points at static storage. */
OIM_API void oim_experiment_config_defaults(oim_experiment_config* config);
OIM_API oim_status oim_benchmark_compute(const oim_graph* graph,
                                         const oim_experiment_config* config,
                                         oim_benchmark** out);
OIM_API void oim_benchmark_free(oim_benchmark* benchmark);
OIM_API double oim_benchmark_value(const oim_benchmark* benchmark);
OIM_API double oim_benchmark_greedy_value(const oim_benchmark* benchmark);
OIM_API const uint32_t* oim_benchmark_greedy_seeds(const oim_benchmark* benchmark, size_t* len);
/* Writes rounds_<run_id>.csv files, summary.csv, aggregate.csv and
 * manifest.txt under config->output_dir. */
OIM_API oim_status oim_run_experiment(const oim_graph* graph, const oim_experiment_config* config,
                                      const oim_benchmark* benchmark);

OIM_API oim_status oim_moving_average(const double* series, size_t len, size_t window,
                                      double* out);
OIM_API oim_status oim_cumulative_regret(const double* rewards, size_t len, double benchmark_value,
                                         double* out);

#ifdef __cplusplus
}
#endif

#endif /* OIMLOFA_H */
