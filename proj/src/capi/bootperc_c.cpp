/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "bootperc.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "bootperc/branching.hpp"
#include "bootperc/combinatorics.hpp"
#include "bootperc/engine.hpp"
#include "bootperc/experiments.hpp"
#include "bootperc/spectral.hpp"
#include "bootperc/thresholds.hpp"
#include "json.hpp"

struct bp_count_table {
  bootperc::combinatorics::CountTable table;
};

struct bp_graph {
  bootperc::engine::Graph graph;
};

namespace {

using namespace bootperc;
using nlohmann::json;

thread_local std::string last_error;

struct NullPointer {
  const char* what;
};

template <class T>
T* need(T* p, const char* what) {
  if (!p) throw NullPointer{what};
  return p;
}

template <class Body>
bp_status guard(Body&& body) noexcept {
  try {
    body();
    return BP_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<bp_status>(static_cast<int>(e.code()));
  } catch (const NullPointer& e) {
    last_error = std::string("null pointer: ") + e.what;
    return BP_ERR_NULL_POINTER;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return BP_ERR_RESOURCE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return BP_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return BP_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) { *need(out, "out") = dup(s); }

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

branching::WalkPolicy policy_from(const bp_walk_policy* p) {
  branching::WalkPolicy w;
  if (p) {
    w.c1 = p->c1;
    w.margin = p->margin;
    w.max_steps = p->max_steps;
  }
  return w;
}

experiments::ExperimentConfig config_from(const bp_experiment_config& c) {
  experiments::ExperimentConfig out;
  out.n = c.n;
  out.r = c.r;
  if (c.use_alpha)
    out.alpha = c.alpha;
  else
    out.p = c.p;
  out.trials = c.trials;
  out.rng_seed = c.rng_seed;
  out.seed_policy = c.seed_policy == BP_SEEDS_ALL ? experiments::SeedPolicy::all : experiments::SeedPolicy::random;
  out.seeds_per_graph = c.seeds_per_graph;
  out.exposure = c.exposure == BP_EXPOSURE_LAZY ? experiments::Exposure::lazy : experiments::Exposure::graph;
  out.k_min = c.k_min;
  out.k_max = c.k_max;
  out.subset_cap = c.subset_cap;
  out.threads = c.threads;
  return out;
}

std::vector<engine::Vertex> seed_of(const uint32_t* seed, int r) {
  need(seed, "seed");
  require(r >= 1, ErrorCode::domain, "r must be positive");
  return {seed, seed + r};
}

}  // namespace

extern "C" {

const char* bp_last_error(void) { return last_error.c_str(); }

const char* bp_status_name(bp_status status) {
  switch (status) {
    case BP_OK: return "ok";
    case BP_ERR_DOMAIN: return "domain";
    case BP_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case BP_ERR_RESOURCE: return "resource";
    case BP_ERR_CAP_EXCEEDED: return "cap_exceeded";
    case BP_ERR_NOT_CONVERGED: return "not_converged";
    case BP_ERR_MISSING_ENTRY: return "missing_entry";
    case BP_ERR_PRECISION: return "precision";
    case BP_ERR_IO: return "io";
    case BP_ERR_INTERNAL: return "internal";
    case BP_ERR_NULL_POINTER: return "null_pointer";
  }
  return "unknown";
}

const char* bp_version(void) { return "0.1.0"; }

void bp_free_string(char* s) { std::free(s); }

// ---- counting tables

bp_status bp_count_table_build(int r, int k_max, bp_variant variant, int level_bound, uint64_t memory_budget_bytes,
                               bp_count_table** out) {
  return guard([&] {
    need(out, "out");
    combinatorics::TableOptions opts;
    switch (variant) {
      case BP_VARIANT_EXACT: opts.variant = combinatorics::Variant::exact; break;
      case BP_VARIANT_TRIANGLE_FREE_LOWER: opts.variant = combinatorics::Variant::triangle_free_lower; break;
      case BP_VARIANT_LEVEL_BOUNDED: opts.variant = combinatorics::Variant::level_bounded; break;
      default: fail(ErrorCode::invalid_argument, "unknown table variant");
    }
    opts.level_bound = level_bound;
    if (memory_budget_bytes) opts.memory_budget_bytes = memory_budget_bytes;
    *out = new bp_count_table{combinatorics::build_count_table(r, k_max, opts)};
  });
}

void bp_count_table_free(bp_count_table* table) { delete table; }

int bp_count_table_r(const bp_count_table* table) { return table ? table->table.r() : 0; }

int bp_count_table_k_max(const bp_count_table* table) { return table ? table->table.k_max() : 0; }

bp_status bp_count_table_entry(const bp_count_table* table, int k, int i, char** decimal) {
  return guard([&] {
    const auto& t = need(table, "table")->table;
    emit(decimal, to_decimal(i == 0 ? t.total(k) : t.at(k, i)));
  });
}

bp_status bp_count_table_csv(const bp_count_table* table, char** csv) {
  return guard([&] { emit(csv, need(table, "table")->table.to_csv()); });
}

bp_status bp_normalized_json(const bp_count_table* table, int k, int i, bp_normalized_kind kind, int has_eps,
                             double eps, char** out) {
  return guard([&] {
    const auto nk =
        kind == BP_KIND_RHO_HAT ? combinatorics::NormalizedKind::rho_hat : combinatorics::NormalizedKind::sigma;
    auto value = combinatorics::normalized(need(table, "table")->table, k, i, nk,
                                           has_eps ? std::optional<double>(eps) : std::nullopt);
    emit(out, combinatorics::to_json(value));
  });
}

bp_status bp_sigma_bound_violations(const bp_count_table* exact, double relative_slack, size_t* violations) {
  return guard([&] {
    *need(violations, "violations") =
        combinatorics::check_sigma_upper_bound(need(exact, "table")->table, relative_slack).size();
  });
}

bp_status bp_brute_force_count_json(int r, int k, int triangle_free, uint64_t cap, char** out) {
  return guard([&] {
    combinatorics::BruteForceOptions opts;
    opts.triangle_free = triangle_free != 0;
    if (cap) opts.cap = cap;
    json j = json::object();
    for (const auto& [i, count] : combinatorics::brute_force_count(r, k, opts))
      j[std::to_string(i)] = to_decimal(count);
    emit(out, j.dump());
  });
}

bp_status bp_verify_induction_json(int i_max, double tail_tolerance, char** out) {
  return guard([&] {
    json j = json::array();
    for (const auto& row : combinatorics::verify_induction_series(i_max, tail_tolerance))
      j.push_back({{"i", row.i},
                   {"log_lhs", row.log_lhs},
                   {"log_rhs", row.log_rhs},
                   {"terms", row.terms},
                   {"tail_bound", row.tail_bound},
                   {"holds", row.holds}});
    emit(out, j.dump());
  });
}

// ---- graphs

bp_status bp_graph_create(size_t n, const uint32_t* edges, size_t edge_count, bp_graph** out) {
  return guard([&] {
    need(out, "out");
    if (edge_count) need(edges, "edges");
    std::vector<engine::Edge> list(edge_count);
    for (size_t e = 0; e < edge_count; ++e) list[e] = {edges[2 * e], edges[2 * e + 1]};
    *out = new bp_graph{engine::Graph(n, list)};
  });
}

bp_status bp_graph_complete(size_t n, bp_graph** out) {
  return guard([&] { *need(out, "out") = new bp_graph{engine::Graph::complete(n)}; });
}

bp_status bp_graph_read(const char* path, bp_graph** out) {
  return guard([&] {
    need(out, "out");
    std::ifstream in(need(path, "path"));
    require(static_cast<bool>(in), ErrorCode::io, std::string("cannot open ") + path);
    *out = new bp_graph{engine::read_edge_list(in)};
  });
}

bp_status bp_graph_write(const bp_graph* g, const char* path) {
  return guard([&] {
    need(g, "graph");
    std::ofstream file(need(path, "path"));
    require(static_cast<bool>(file), ErrorCode::io, std::string("cannot open ") + path);
    engine::write_edge_list(g->graph, file);
    file.flush();
    require(static_cast<bool>(file), ErrorCode::io, std::string("write failed: ") + path);
  });
}

void bp_graph_free(bp_graph* g) { delete g; }

size_t bp_graph_vertex_count(const bp_graph* g) { return g ? g->graph.n() : 0; }

size_t bp_graph_edge_count(const bp_graph* g) { return g ? g->graph.edge_count() : 0; }

int bp_graph_has_edge(const bp_graph* g, uint32_t u, uint32_t v) {
  if (!g || u >= g->graph.n() || v >= g->graph.n()) return 0;
  return g->graph.has_edge(u, v) ? 1 : 0;
}

bp_status bp_bootstrap_json(const bp_graph* g, const uint32_t* seed, int r, char** out) {
  return guard([&] {
    const auto s = seed_of(seed, r);
    emit(out, engine::trace_to_json(engine::bootstrap(need(g, "graph")->graph, s, r)));
  });
}

bp_status bp_hat_bootstrap_json(const bp_graph* g, const uint32_t* seed, int r, uint64_t node_budget, char** out) {
  return guard([&] {
    const auto s = seed_of(seed, r);
    const auto trace =
        engine::hat_bootstrap(need(g, "graph")->graph, s, r, node_budget ? node_budget : engine::kDefaultNodeBudget);
    emit(out, engine::trace_to_json(trace));
  });
}

bp_status bp_graph_bootstrap_closure(const bp_graph* g, int k, bp_graph** out) {
  return guard([&] {
    need(out, "out");
    *out = new bp_graph{engine::graph_bootstrap_closure(need(g, "graph")->graph, k)};
  });
}

bp_status bp_is_susceptible(const bp_graph* g, int r, int exhaustive, uint64_t samples, uint64_t rng_seed,
                            uint64_t cap, bp_verdict* verdict, uint32_t* witness) {
  return guard([&] {
    need(verdict, "verdict");
    engine::SusceptibilityOptions opts;
    opts.exhaustive = exhaustive != 0;
    opts.samples = samples;
    opts.rng_seed = rng_seed;
    if (cap) opts.cap = cap;
    const auto result = engine::is_susceptible(need(g, "graph")->graph, r, opts);
    switch (result.verdict) {
      case engine::Verdict::yes: *verdict = BP_VERDICT_YES; break;
      case engine::Verdict::no: *verdict = BP_VERDICT_NO; break;
      case engine::Verdict::unknown: *verdict = BP_VERDICT_UNKNOWN; break;
    }
    if (witness && result.verdict == engine::Verdict::yes)
      std::copy(result.witness.begin(), result.witness.end(), witness);
  });
}

bp_status bp_find_contagious_set(const bp_graph* g, int r, int min_edges, uint64_t cap, int* found,
                                 uint32_t* witness) {
  return guard([&] {
    need(found, "found");
    const auto set = engine::find_contagious_set(need(g, "graph")->graph, r, min_edges, cap ? cap : 50'000'000);
    *found = set ? 1 : 0;
    if (set && witness) std::copy(set->begin(), set->end(), witness);
  });
}

// ---- thresholds

bp_status bp_critical_alpha(int r, double* out) {
  return guard([&] { *need(out, "out") = thresholds::critical_alpha(r); });
}

bp_status bp_critical_alpha_H(int r, int ell, double* out) {
  return guard([&] { *need(out, "out") = thresholds::critical_alpha_H(r, ell); });
}

bp_status bp_beta_r(int r, double alpha, double* out) {
  return guard([&] { *need(out, "out") = thresholds::beta_r(r, alpha); });
}

bp_status bp_mu(int r, double alpha, double beta, double gamma, double* out) {
  return guard([&] { *need(out, "out") = thresholds::mu(r, alpha, beta, gamma); });
}

bp_status bp_mu_star(int r, double alpha, double beta, double* out) {
  return guard([&] { *need(out, "out") = thresholds::mu_star(r, alpha, beta); });
}

bp_status bp_mu_eps(int r, double eps, double alpha, double beta, double gamma, double* out) {
  return guard([&] { *need(out, "out") = thresholds::mu_eps(r, eps, alpha, beta, gamma); });
}

bp_status bp_mu_bar(int r, double alpha, double beta, double gamma, double* out) {
  return guard([&] { *need(out, "out") = thresholds::mu_bar(r, alpha, beta, gamma); });
}

bp_status bp_beta_star(int r, double alpha, double tol, double* out) {
  return guard([&] { *need(out, "out") = tol > 0 ? thresholds::beta_star(r, alpha, tol) : thresholds::beta_star(r, alpha); });
}

bp_status bp_k_r(int r, double eps, double* out) {
  return guard([&] { *need(out, "out") = thresholds::k_r_of_eps(r, eps); });
}

bp_status bp_theta(int r, double alpha, double n, double* out) {
  return guard([&] { *need(out, "out") = thresholds::theta(r, alpha, n); });
}

bp_status bp_beta_r_eps(int r, double eps, double* out) {
  return guard([&] { *need(out, "out") = thresholds::beta_r_eps(r, eps); });
}

double bp_zeta_three_halves(void) { return thresholds::zeta_three_halves(); }

bp_status bp_threshold_params_json(int r, double alpha, double n, char** out) {
  return guard([&] {
    const auto p = thresholds::make_params(r, alpha, n);
    json j{{"r", p.r},           {"alpha", p.alpha},   {"n", p.n},
           {"p", p.p},           {"eps", p.eps},       {"k_r", p.k_r},
           {"beta_r", p.beta_r}, {"beta_star", p.beta_star}, {"alpha_r", p.alpha_r},
           {"alpha_H", p.alpha_H}};
    emit(out, j.dump());
  });
}

void bp_grid_init(bp_grid* grid) {
  if (!grid) return;
  const thresholds::GridSpec d;
  *grid = {d.alpha_points, d.beta_points, d.gamma_points, d.eps_points, d.i_max, d.tolerance};
}

bp_status bp_verify_inequalities_json(const int* r_set, size_t r_count, const bp_grid* grid, char** out) {
  return guard([&] {
    if (r_count) need(r_set, "r_set");
    thresholds::GridSpec spec;
    if (grid) {
      spec.alpha_points = grid->alpha_points;
      spec.beta_points = grid->beta_points;
      spec.gamma_points = grid->gamma_points;
      spec.eps_points = grid->eps_points;
      spec.i_max = grid->i_max;
      spec.tolerance = grid->tolerance;
    }
    const std::vector<int> rs(r_set, r_set + r_count);
    emit(out, thresholds::to_json(thresholds::verify_inequalities(rs, spec)));
  });
}

bp_status bp_verify_lambda_series_json(int i_max, double tail_tolerance, char** out) {
  return guard([&] {
    json j = json::array();
    for (const auto& row : thresholds::verify_lambda_series(i_max, tail_tolerance))
      j.push_back({{"i", row.i},
                   {"terms", row.terms},
                   {"tail_bound", row.tail_bound},
                   {"log10_abs_excess", row.log10_abs_excess},
                   {"log10_allowance", row.log10_allowance},
                   {"holds", row.holds}});
    emit(out, j.dump());
  });
}

// ---- branching

void bp_walk_policy_init(bp_walk_policy* policy) {
  if (!policy) return;
  const branching::WalkPolicy d;
  *policy = {d.c1, d.margin, d.max_steps};
}

bp_status bp_simulate_walk_json(int r, double eps, uint64_t rng_seed, const bp_walk_policy* policy, char** out) {
  return guard([&] {
    const auto o = branching::simulate_walk(r, eps, rng_seed, policy_from(policy));
    json j{{"survived", o.survived},
           {"max_alive", o.max_alive},
           {"steps", o.steps},
           {"reason", branching::reason_name(o.reason)}};
    j["extinction_time"] = o.extinction_time ? json(*o.extinction_time) : json(nullptr);
    emit(out, j.dump());
  });
}

bp_status bp_survival_mc(int r, double eps, uint64_t trials, uint64_t rng_seed, const bp_walk_policy* policy,
                         unsigned threads, bp_survival* out) {
  return guard([&] {
    need(out, "out");
    const auto e = branching::survival_probability_mc(r, eps, trials, rng_seed, policy_from(policy), threads);
    *out = {e.r, e.eps, e.trials, e.survivors, e.p_hat, e.stderr_, e.asymptotic};
  });
}

bp_status bp_survival_json(const bp_survival* estimate, char** out) {
  return guard([&] {
    const auto& s = *need(estimate, "estimate");
    branching::SurvivalEstimate e;
    e.r = s.r;
    e.eps = s.eps;
    e.trials = s.trials;
    e.survivors = s.survivors;
    e.p_hat = s.p_hat;
    e.stderr_ = s.stderr_;
    e.asymptotic = s.asymptotic;
    emit(out, branching::to_json(e));
  });
}

bp_status bp_survival_policy_exact(int r, double eps, const bp_walk_policy* policy, double* out) {
  return guard([&] { *need(out, "out") = branching::survival_probability_policy(r, eps, policy_from(policy)); });
}

bp_status bp_survival_asymptotic(int r, double eps, double* out) {
  return guard([&] { *need(out, "out") = branching::survival_asymptotic(r, eps); });
}

bp_status bp_hitting_exact(int r, double eps, int k, int i, double* out) {
  return guard([&] { *need(out, "out") = branching::hitting_probability_exact(r, eps, k, i); });
}

bp_status bp_hitting_mc(int r, double eps, int k_max, uint64_t trials, uint64_t rng_seed, unsigned threads,
                        bp_format format, char** out) {
  return guard([&] {
    need(out, "out");
    const auto tally = branching::hitting_frequency_mc(r, eps, k_max, trials, rng_seed, threads);
    const auto exact = combinatorics::build_count_table(r, k_max);
    std::string csv = "k,i,hits,trials,frequency,stderr,exact\n";
    json rows = json::array();
    for (int k = r + 1; k <= k_max; ++k)
      for (int i = 1; i <= k - r; ++i) {
        const auto it = tally.hits.find({k, i});
        const std::uint64_t hits = it == tally.hits.end() ? 0 : it->second;
        const double ex = branching::hitting_probability_exact(exact, eps, k, i);
        csv += std::to_string(k) + "," + std::to_string(i) + "," + std::to_string(hits) + "," +
               std::to_string(tally.trials) + "," + fmt(tally.frequency(k, i)) + "," + fmt(tally.stderr_of(k, i)) +
               "," + fmt(ex) + "\n";
        rows.push_back({{"k", k},
                        {"i", i},
                        {"hits", hits},
                        {"frequency", tally.frequency(k, i)},
                        {"stderr", tally.stderr_of(k, i)},
                        {"exact", ex}});
      }
    if (format == BP_FORMAT_JSON) {
      json j{{"r", r}, {"eps", eps}, {"k_max", k_max}, {"trials", tally.trials}, {"rows", rows}};
      emit(out, j.dump());
    } else {
      emit(out, csv);
    }
  });
}

bp_status bp_simulate_generations_json(int r, double eps, uint64_t rng_seed, int64_t k_cap, char** out) {
  return guard([&] {
    json j = json::array();
    for (const auto& g : branching::simulate_generations(r, eps, rng_seed, k_cap)) j.push_back({g.s, g.y});
    emit(out, j.dump());
  });
}

// ---- spectral

bp_status bp_lambda(int r, int ell, bp_lambda_method method, double tol, bp_lambda_result* out) {
  return guard([&] {
    need(out, "out");
    spectral::LambdaResult res;
    if (method == BP_METHOD_PSI)
      res = tol > 0 ? spectral::lambda_via_psi(r, ell, tol) : spectral::lambda_via_psi(r, ell);
    else if (method == BP_METHOD_DLAMBDA)
      res = tol > 0 ? spectral::lambda_via_dlambda(r, ell, tol) : spectral::lambda_via_dlambda(r, ell);
    else
      fail(ErrorCode::invalid_argument, "unknown lambda method");
    // the psi vector lives on ell^2 coordinates; its last block is v
    const spectral::Vector v = method == BP_METHOD_PSI ? spectral::Vector(res.v.tail(ell)) : res.v;
    const double lift = spectral::lift_residual(spectral::build_A(r, ell), res.lambda, v);
    *out = {res.r, res.ell, res.lambda, res.iterations, res.residual, lift};
  });
}

bp_status bp_lambda_json(int r, int ell, bp_lambda_method method, double tol, char** out) {
  return guard([&] {
    spectral::LambdaResult res;
    if (method == BP_METHOD_PSI)
      res = tol > 0 ? spectral::lambda_via_psi(r, ell, tol) : spectral::lambda_via_psi(r, ell);
    else if (method == BP_METHOD_DLAMBDA)
      res = tol > 0 ? spectral::lambda_via_dlambda(r, ell, tol) : spectral::lambda_via_dlambda(r, ell);
    else
      fail(ErrorCode::invalid_argument, "unknown lambda method");
    emit(out, spectral::to_json(res));
  });
}

// ---- experiments

void bp_experiment_config_init(bp_experiment_config* config) {
  if (!config) return;
  const experiments::ExperimentConfig d;
  *config = {};
  config->n = d.n;
  config->r = d.r;
  config->use_alpha = 1;
  config->alpha = 1.0;
  config->p = 0;
  config->trials = d.trials;
  config->rng_seed = d.rng_seed;
  config->seed_policy = BP_SEEDS_RANDOM;
  config->seeds_per_graph = d.seeds_per_graph;
  config->exposure = BP_EXPOSURE_GRAPH;
  config->k_min = d.k_min;
  config->k_max = d.k_max;
  config->subset_cap = d.subset_cap;
  config->threads = d.threads;
}

bp_status bp_sample_gnp(size_t n, double p, uint64_t rng_seed, bp_graph** out) {
  return guard([&] {
    need(out, "out");
    *out = new bp_graph{experiments::sample_gnp(n, p, rng_seed)};
  });
}

bp_status bp_estimate_pki(const bp_experiment_config* config, bp_format format, char** out) {
  return guard([&] {
    const auto est = experiments::estimate_Pki(config_from(*need(config, "config")));
    emit(out, format == BP_FORMAT_JSON ? experiments::to_json(est) : experiments::to_csv(est));
  });
}

bp_status bp_terminal_frequency(const bp_experiment_config* config, bp_format format, char** out) {
  return guard([&] {
    const auto est = experiments::terminal_set_frequency(config_from(*need(config, "config")));
    emit(out, format == BP_FORMAT_JSON ? experiments::to_json(est) : experiments::to_csv(est));
  });
}

bp_status bp_seed_edge_sweep(size_t n, const double* alphas, size_t alpha_count, uint64_t trials, uint64_t rng_seed,
                             unsigned threads, bp_format format, char** out) {
  return guard([&] {
    if (alpha_count) need(alphas, "alphas");
    const std::vector<double> a(alphas, alphas + alpha_count);
    const auto rows = experiments::seed_edge_sweep(n, a, trials, rng_seed, threads);
    emit(out, format == BP_FORMAT_JSON ? experiments::to_json(rows) : experiments::to_csv(rows));
  });
}

void bp_susceptibility_config_init(bp_susceptibility_config* config) {
  if (!config) return;
  const experiments::SusceptibilityConfig d;
  *config = {};
  config->n = d.n;
  config->r = d.r;
  config->trials = d.trials;
  config->rng_seed = d.rng_seed;
  config->seed_policy = BP_SEEDS_ALL;
  config->seeds_per_graph = d.seeds_per_graph;
  config->subset_cap = d.subset_cap;
  config->threads = d.threads;
}

bp_status bp_susceptibility_sweep(const bp_susceptibility_config* config, const double* alphas, size_t alpha_count,
                                  bp_format format, char** out) {
  return guard([&] {
    const auto& c = *need(config, "config");
    if (alpha_count) need(alphas, "alphas");
    experiments::SusceptibilityConfig sc;
    sc.n = c.n;
    sc.r = c.r;
    sc.alphas.assign(alphas, alphas + alpha_count);
    sc.trials = c.trials;
    sc.rng_seed = c.rng_seed;
    sc.seed_policy = c.seed_policy == BP_SEEDS_ALL ? experiments::SeedPolicy::all : experiments::SeedPolicy::random;
    sc.seeds_per_graph = c.seeds_per_graph;
    sc.subset_cap = c.subset_cap;
    sc.threads = c.threads;
    const auto rows = experiments::susceptibility_sweep(sc);
    emit(out, format == BP_FORMAT_JSON ? experiments::to_json(rows) : experiments::to_csv(rows));
  });
}

bp_status bp_write_text(const char* path, const char* text) {
  return guard([&] { experiments::write_text(need(path, "path"), need(text, "text")); });
}

}  // extern "C"
