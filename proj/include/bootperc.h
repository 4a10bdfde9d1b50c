/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#ifndef BOOTPERC_H
#define BOOTPERC_H

#include <stddef.h>
#include <stdint.h>

#if defined(BOOTPERC_BUILDING_LIBRARY)
#define BOOTPERC_API __attribute__((visibility("default")))
#else
#define BOOTPERC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status. On failure the message is available
 * from bp_last_error() on the same thread until the next failing call.
 * Strings handed out through char** are owned by the caller and released
 * with bp_free_string(). */
typedef enum bp_status {
  BP_OK = 0,
  BP_ERR_DOMAIN = 1,
  BP_ERR_INVALID_ARGUMENT = 2,
  BP_ERR_RESOURCE = 3,
  BP_ERR_CAP_EXCEEDED = 4,
  BP_ERR_NOT_CONVERGED = 5,
  BP_ERR_MISSING_ENTRY = 6,
  BP_ERR_PRECISION = 7,
  BP_ERR_IO = 8,
  BP_ERR_INTERNAL = 9,
  BP_ERR_NULL_POINTER = 10
} bp_status;

BOOTPERC_API const char* bp_last_error(void);
BOOTPERC_API const char* bp_status_name(bp_status status);
BOOTPERC_API const char* bp_version(void);
BOOTPERC_API void bp_free_string(char* s);

typedef enum bp_format { BP_FORMAT_CSV = 0, BP_FORMAT_JSON = 1 } bp_format;

/* ---- counting tables ---------------------------------------------------- */

typedef struct bp_count_table bp_count_table;

typedef enum bp_variant {
  BP_VARIANT_EXACT = 0,
  BP_VARIANT_TRIANGLE_FREE_LOWER = 1,
  BP_VARIANT_LEVEL_BOUNDED = 2
} bp_variant;

typedef enum bp_normalized_kind { BP_KIND_SIGMA = 0, BP_KIND_RHO_HAT = 1 } bp_normalized_kind;

/* memory_budget_bytes = 0 selects the default budget. */
BOOTPERC_API bp_status bp_count_table_build(int r, int k_max, bp_variant variant, int level_bound,
                                            uint64_t memory_budget_bytes, bp_count_table** out);
BOOTPERC_API void bp_count_table_free(bp_count_table* table);
BOOTPERC_API int bp_count_table_r(const bp_count_table* table);
BOOTPERC_API int bp_count_table_k_max(const bp_count_table* table);
/* Decimal string of the entry (k, i); i = 0 gives the row total. */
BOOTPERC_API bp_status bp_count_table_entry(const bp_count_table* table, int k, int i, char** decimal);
/* Header r,k,i,variant,count. */
BOOTPERC_API bp_status bp_count_table_csv(const bp_count_table* table, char** csv);
/* eps is used when has_eps != 0; rho_hat needs it. JSON {r,k,i,kind,log_value}. */
BOOTPERC_API bp_status bp_normalized_json(const bp_count_table* table, int k, int i, bp_normalized_kind kind,
                                          int has_eps, double eps, char** json);
BOOTPERC_API bp_status bp_sigma_bound_violations(const bp_count_table* exact, double relative_slack,
                                                 size_t* violations);
/* JSON object {"i": count, ...} of minimally susceptible graphs on k labelled vertices. */
BOOTPERC_API bp_status bp_brute_force_count_json(int r, int k, int triangle_free, uint64_t cap, char** json);
/* JSON array of {i, log_lhs, log_rhs, terms, tail_bound, holds}. */
BOOTPERC_API bp_status bp_verify_induction_json(int i_max, double tail_tolerance, char** json);

/* ---- graphs and percolation --------------------------------------------- */

typedef struct bp_graph bp_graph;

/* edges holds 2 * edge_count vertex ids. */
BOOTPERC_API bp_status bp_graph_create(size_t n, const uint32_t* edges, size_t edge_count, bp_graph** out);
BOOTPERC_API bp_status bp_graph_complete(size_t n, bp_graph** out);
BOOTPERC_API bp_status bp_graph_read(const char* path, bp_graph** out);
BOOTPERC_API bp_status bp_graph_write(const bp_graph* g, const char* path);
BOOTPERC_API void bp_graph_free(bp_graph* g);
BOOTPERC_API size_t bp_graph_vertex_count(const bp_graph* g);
BOOTPERC_API size_t bp_graph_edge_count(const bp_graph* g);
BOOTPERC_API int bp_graph_has_edge(const bp_graph* g, uint32_t u, uint32_t v);

/* Trace JSON {seed, levels, tau, witness_edges?}. */
BOOTPERC_API bp_status bp_bootstrap_json(const bp_graph* g, const uint32_t* seed, int r, char** json);
/* node_budget = 0 selects the default. */
BOOTPERC_API bp_status bp_hat_bootstrap_json(const bp_graph* g, const uint32_t* seed, int r, uint64_t node_budget,
                                             char** json);
BOOTPERC_API bp_status bp_graph_bootstrap_closure(const bp_graph* g, int k, bp_graph** out);

typedef enum bp_verdict { BP_VERDICT_YES = 0, BP_VERDICT_NO = 1, BP_VERDICT_UNKNOWN = 2 } bp_verdict;

/* exhaustive != 0 tries every r-set (bounded by cap); otherwise samples r-sets.
 * witness, when not null, receives r vertex ids on a yes verdict. */
BOOTPERC_API bp_status bp_is_susceptible(const bp_graph* g, int r, int exhaustive, uint64_t samples,
                                         uint64_t rng_seed, uint64_t cap, bp_verdict* verdict, uint32_t* witness);
/* First contagious r-set spanning at least min_edges edges. */
BOOTPERC_API bp_status bp_find_contagious_set(const bp_graph* g, int r, int min_edges, uint64_t cap, int* found,
                                              uint32_t* witness);

/* ---- threshold functions ------------------------------------------------ */

BOOTPERC_API bp_status bp_critical_alpha(int r, double* out);
BOOTPERC_API bp_status bp_critical_alpha_H(int r, int ell, double* out);
BOOTPERC_API bp_status bp_beta_r(int r, double alpha, double* out);
BOOTPERC_API bp_status bp_mu(int r, double alpha, double beta, double gamma, double* out);
BOOTPERC_API bp_status bp_mu_star(int r, double alpha, double beta, double* out);
BOOTPERC_API bp_status bp_mu_eps(int r, double eps, double alpha, double beta, double gamma, double* out);
BOOTPERC_API bp_status bp_mu_bar(int r, double alpha, double beta, double gamma, double* out);
/* tol <= 0 selects the default. */
BOOTPERC_API bp_status bp_beta_star(int r, double alpha, double tol, double* out);
BOOTPERC_API bp_status bp_k_r(int r, double eps, double* out);
BOOTPERC_API bp_status bp_theta(int r, double alpha, double n, double* out);
BOOTPERC_API bp_status bp_beta_r_eps(int r, double eps, double* out);
BOOTPERC_API double bp_zeta_three_halves(void);
/* {r, alpha, n, p, eps, k_r, beta_r, beta_star, alpha_r, alpha_H:[...]} */
BOOTPERC_API bp_status bp_threshold_params_json(int r, double alpha, double n, char** json);

typedef struct bp_grid {
  int alpha_points;
  int beta_points;
  int gamma_points;
  int eps_points;
  int i_max;
  double tolerance;
} bp_grid;

BOOTPERC_API void bp_grid_init(bp_grid* grid);
/* grid may be null for the default grid. */
BOOTPERC_API bp_status bp_verify_inequalities_json(const int* r_set, size_t r_count, const bp_grid* grid,
                                                   char** json);
BOOTPERC_API bp_status bp_verify_lambda_series_json(int i_max, double tail_tolerance, char** json);

/* ---- branching process -------------------------------------------------- */

typedef struct bp_walk_policy {
  double c1;
  int64_t margin;
  int64_t max_steps;
} bp_walk_policy;

BOOTPERC_API void bp_walk_policy_init(bp_walk_policy* policy);

typedef struct bp_survival {
  int r;
  double eps;
  uint64_t trials;
  uint64_t survivors;
  double p_hat;
  double stderr_;
  double asymptotic;
} bp_survival;

/* policy may be null for the default; threads = 0 uses all cores. */
BOOTPERC_API bp_status bp_simulate_walk_json(int r, double eps, uint64_t rng_seed, const bp_walk_policy* policy,
                                             char** json);
BOOTPERC_API bp_status bp_survival_mc(int r, double eps, uint64_t trials, uint64_t rng_seed,
                                      const bp_walk_policy* policy, unsigned threads, bp_survival* out);
BOOTPERC_API bp_status bp_survival_json(const bp_survival* estimate, char** json);
BOOTPERC_API bp_status bp_survival_policy_exact(int r, double eps, const bp_walk_policy* policy, double* out);
BOOTPERC_API bp_status bp_survival_asymptotic(int r, double eps, double* out);
BOOTPERC_API bp_status bp_hitting_exact(int r, double eps, int k, int i, double* out);
/* Tally of hitting events for r < k <= k_max: CSV k,i,hits,trials,frequency,stderr,exact or JSON. */
BOOTPERC_API bp_status bp_hitting_mc(int r, double eps, int k_max, uint64_t trials, uint64_t rng_seed,
                                     unsigned threads, bp_format format, char** out);
/* JSON array of [S_t, Y_t]. */
BOOTPERC_API bp_status bp_simulate_generations_json(int r, double eps, uint64_t rng_seed, int64_t k_cap,
                                                    char** json);

/* ---- spectral ----------------------------------------------------------- */

typedef enum bp_lambda_method { BP_METHOD_PSI = 0, BP_METHOD_DLAMBDA = 1 } bp_lambda_method;

typedef struct bp_lambda_result {
  int r;
  int ell;
  double lambda;
  int iterations;
  double residual;
  double lift_residual; /* max-norm residual of the lifted vector, relative */
} bp_lambda_result;

/* tol <= 0 selects the method default. */
BOOTPERC_API bp_status bp_lambda(int r, int ell, bp_lambda_method method, double tol, bp_lambda_result* out);
/* {r, ell, method, lambda, iterations, residual} */
BOOTPERC_API bp_status bp_lambda_json(int r, int ell, bp_lambda_method method, double tol, char** json);

/* ---- random graph experiments ------------------------------------------- */

typedef enum bp_seed_policy { BP_SEEDS_ALL = 0, BP_SEEDS_RANDOM = 1 } bp_seed_policy;
typedef enum bp_exposure { BP_EXPOSURE_GRAPH = 0, BP_EXPOSURE_LAZY = 1 } bp_exposure;

typedef struct bp_experiment_config {
  size_t n;
  int r;
  int use_alpha; /* p = theta_r(alpha, n) when set, else p */
  double alpha;
  double p;
  uint64_t trials;
  uint64_t rng_seed;
  bp_seed_policy seed_policy;
  uint64_t seeds_per_graph;
  bp_exposure exposure;
  int k_min; /* 0 means r + 1 */
  int k_max;
  uint64_t subset_cap;
  unsigned threads;
} bp_experiment_config;

BOOTPERC_API void bp_experiment_config_init(bp_experiment_config* config);
BOOTPERC_API bp_status bp_sample_gnp(size_t n, double p, uint64_t rng_seed, bp_graph** out);
/* CSV k,i,hits,seed_runs,frequency,stderr,comparator; i = 0 rows are totals over i. */
BOOTPERC_API bp_status bp_estimate_pki(const bp_experiment_config* config, bp_format format, char** out);
/* CSV k,i,count,seed_runs,frequency over terminal (|V_tau|, |I_tau|). */
BOOTPERC_API bp_status bp_terminal_frequency(const bp_experiment_config* config, bp_format format, char** out);
/* r = 2; CSV alpha,p,trials,successes,frequency,stderr. */
BOOTPERC_API bp_status bp_seed_edge_sweep(size_t n, const double* alphas, size_t alpha_count, uint64_t trials,
                                          uint64_t rng_seed, unsigned threads, bp_format format, char** out);

typedef struct bp_susceptibility_config {
  size_t n;
  int r;
  uint64_t trials;
  uint64_t rng_seed;
  bp_seed_policy seed_policy;
  uint64_t seeds_per_graph;
  uint64_t subset_cap;
  unsigned threads;
} bp_susceptibility_config;

BOOTPERC_API void bp_susceptibility_config_init(bp_susceptibility_config* config);
/* CSV alpha,p,trials,susceptible,susceptible_frequency,susceptible_stderr,spread_mean,spread_max. */
BOOTPERC_API bp_status bp_susceptibility_sweep(const bp_susceptibility_config* config, const double* alphas,
                                               size_t alpha_count, bp_format format, char** out);

BOOTPERC_API bp_status bp_write_text(const char* path, const char* text);

#ifdef __cplusplus
}
#endif

#endif /* BOOTPERC_H */
