/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
// Command-line front end. Talks to the library only through bootperc.h.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bootperc.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct Failure {
  bp_status status;
  std::string message;
};

void check(bp_status s) {
  if (s != BP_OK) throw Failure{s, bp_last_error()};
}

std::string take(char* s) {
  std::string out(s ? s : "");
  bp_free_string(s);
  return out;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Owns an optional --out destination; otherwise prints to stdout.
void deliver(const std::string& text, const std::string& out_path) {
  std::string body = text;
  if (body.empty() || body.back() != '\n') body += '\n';
  if (out_path.empty())
    std::cout << body;
  else
    check(bp_write_text(out_path.c_str(), body.c_str()));
}

bp_format parse_format(const std::string& f) { return f == "json" ? BP_FORMAT_JSON : BP_FORMAT_CSV; }

const std::map<std::string, bp_variant> kVariants{{"exact", BP_VARIANT_EXACT},
                                                   {"triangle_free_lower", BP_VARIANT_TRIANGLE_FREE_LOWER},
                                                   {"level_bounded", BP_VARIANT_LEVEL_BOUNDED}};

struct GraphHandle {
  bp_graph* g = nullptr;
  ~GraphHandle() { bp_graph_free(g); }
};

struct TableHandle {
  bp_count_table* t = nullptr;
  ~TableHandle() { bp_count_table_free(t); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bootstrap percolation on random graphs: counts, dynamics, thresholds, branching, spectra"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bp_version()));

  // format stays empty unless given; each command picks its own default
  std::string out_path, format;
  auto add_output = [&](CLI::App* cmd, const std::string& default_format) {
    cmd->add_option("--out", out_path, "write to this file instead of stdout");
    cmd->add_option("--format", format, "csv or json (default " + default_format + ")")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto format_or = [&](bp_format fallback) { return format.empty() ? fallback : parse_format(format); };
  std::function<void()> action;

  // ---- counts
  auto* counts = app.add_subcommand("counts", "minimally susceptible graph counts");
  counts->require_subcommand(1);
  int r = 2, k = 0, k_max = 12, i = 0, level_bound = 0, ell = 0;
  std::string variant = "exact";
  {
    auto* table = counts->add_subcommand("table", "count table as CSV r,k,i,variant,count");
    table->add_option("--r", r)->required();
    table->add_option("--k-max", k_max)->required();
    table->add_option("--variant", variant)->check(CLI::IsMember({"exact", "triangle_free_lower", "level_bounded"}));
    table->add_option("--level-bound", level_bound, "level size bound for level_bounded");
    table->add_option("--out", out_path);
    table->callback([&] {
      action = [&] {
        TableHandle t;
        check(bp_count_table_build(r, k_max, kVariants.at(variant), level_bound, 0, &t.t));
        char* csv = nullptr;
        check(bp_count_table_csv(t.t, &csv));
        deliver(take(csv), out_path);
      };
    });

    auto* brute = counts->add_subcommand("brute", "exhaustive count on k labelled vertices, JSON {i: count}");
    static int triangle_free = 0;
    brute->add_option("--r", r)->required();
    brute->add_option("--k", k)->required();
    brute->add_flag("--triangle-free", triangle_free);
    brute->callback([&] {
      action = [&] {
        char* j = nullptr;
        check(bp_brute_force_count_json(r, k, triangle_free, 0, &j));
        deliver(take(j), out_path);
      };
    });

    auto* norm = counts->add_subcommand("normalized", "JSON {r,k,i,kind,log_value}");
    static std::string kind = "sigma";
    static std::optional<double> eps;
    norm->add_option("--r", r)->required();
    norm->add_option("--k", k)->required();
    norm->add_option("--i", i)->required();
    norm->add_option("--kind", kind)->check(CLI::IsMember({"sigma", "rho_hat"}));
    norm->add_option("--eps", eps);
    norm->callback([&] {
      action = [&] {
        TableHandle t;
        const bp_variant v = kind == "rho_hat" ? BP_VARIANT_TRIANGLE_FREE_LOWER : BP_VARIANT_EXACT;
        check(bp_count_table_build(r, k, v, 0, 0, &t.t));
        char* j = nullptr;
        check(bp_normalized_json(t.t, k, i, kind == "rho_hat" ? BP_KIND_RHO_HAT : BP_KIND_SIGMA, eps.has_value(),
                                 eps.value_or(0), &j));
        deliver(take(j), out_path);
      };
    });
  }

  // ---- graph
  auto* graph = app.add_subcommand("graph", "percolation on an edge-list graph file");
  graph->require_subcommand(1);
  std::string graph_path;
  std::vector<std::uint32_t> seed;
  {
    auto* run = graph->add_subcommand("bootstrap", "r-neighbour trace as JSON");
    static bool hat = false;
    run->add_option("--graph", graph_path)->required()->check(CLI::ExistingFile);
    run->add_option("--r", r)->required();
    run->add_option("--seed-set", seed, "r vertex ids")->required()->delimiter(',');
    run->add_flag("--hat", hat, "triangle-free witnessed variant");
    run->add_option("--out", out_path);
    run->callback([&] {
      action = [&] {
        GraphHandle g;
        check(bp_graph_read(graph_path.c_str(), &g.g));
        if (static_cast<int>(seed.size()) != r) throw Failure{BP_ERR_INVALID_ARGUMENT, "--seed-set needs r ids"};
        char* j = nullptr;
        check(hat ? bp_hat_bootstrap_json(g.g, seed.data(), r, 0, &j) : bp_bootstrap_json(g.g, seed.data(), r, &j));
        deliver(take(j), out_path);
      };
    });

    auto* closure = graph->add_subcommand("closure", "K_k graph bootstrap closure, written as an edge list");
    closure->add_option("--graph", graph_path)->required()->check(CLI::ExistingFile);
    closure->add_option("--k", k)->required();
    closure->add_option("--out", out_path)->required();
    closure->callback([&] {
      action = [&] {
        GraphHandle g, c;
        check(bp_graph_read(graph_path.c_str(), &g.g));
        check(bp_graph_bootstrap_closure(g.g, k, &c.g));
        check(bp_graph_write(c.g, out_path.c_str()));
      };
    });

    auto* susc = graph->add_subcommand("susceptible", "is some r-set contagious? JSON {verdict, witness}");
    static std::uint64_t samples = 0, rng_seed = 0;
    susc->add_option("--graph", graph_path)->required()->check(CLI::ExistingFile);
    susc->add_option("--r", r)->required();
    susc->add_option("--samples", samples, "sample this many r-sets instead of trying all");
    susc->add_option("--seed", rng_seed);
    susc->callback([&] {
      action = [&] {
        GraphHandle g;
        check(bp_graph_read(graph_path.c_str(), &g.g));
        std::vector<std::uint32_t> witness(static_cast<std::size_t>(std::max(r, 0)));
        bp_verdict verdict{};
        check(bp_is_susceptible(g.g, r, samples == 0, samples, rng_seed, 0, &verdict, witness.data()));
        static const char* names[] = {"yes", "no", "unknown"};
        std::string j = std::string("{\"verdict\":\"") + names[verdict] + "\"";
        if (verdict == BP_VERDICT_YES) {
          j += ",\"witness\":[";
          for (std::size_t w = 0; w < witness.size(); ++w) j += (w ? "," : "") + std::to_string(witness[w]);
          j += "]";
        }
        deliver(j + "}", out_path);
      };
    });
  }

  // ---- thresholds
  auto* thr = app.add_subcommand("thresholds", "threshold functions and the inequality verifier");
  thr->require_subcommand(1);
  double alpha = 1, beta = 1, gamma = 0.5, eps_v = 0.1, n_real = 1e6, tol = 0;
  {
    auto* eval = thr->add_subcommand("eval", "evaluate one function; prints the value");
    static std::string name;
    eval->add_option("name", name, "critical_alpha critical_alpha_H beta_r mu mu_star mu_eps mu_bar beta_star k_r "
                                   "theta beta_r_eps zeta_three_halves params")
        ->required()
        ->check(CLI::IsMember({"critical_alpha", "critical_alpha_H", "beta_r", "mu", "mu_star", "mu_eps", "mu_bar",
                               "beta_star", "k_r", "theta", "beta_r_eps", "zeta_three_halves", "params"}));
    eval->add_option("--r", r);
    eval->add_option("--alpha", alpha);
    eval->add_option("--beta", beta);
    eval->add_option("--gamma", gamma);
    eval->add_option("--eps", eps_v);
    eval->add_option("--n", n_real);
    eval->add_option("--ell", ell);
    eval->add_option("--tol", tol);
    eval->callback([&] {
      action = [&] {
        double v = 0;
        if (name == "params") {
          char* j = nullptr;
          check(bp_threshold_params_json(r, alpha, n_real, &j));
          deliver(take(j), out_path);
          return;
        }
        if (name == "critical_alpha") check(bp_critical_alpha(r, &v));
        else if (name == "critical_alpha_H") check(bp_critical_alpha_H(r, ell, &v));
        else if (name == "beta_r") check(bp_beta_r(r, alpha, &v));
        else if (name == "mu") check(bp_mu(r, alpha, beta, gamma, &v));
        else if (name == "mu_star") check(bp_mu_star(r, alpha, beta, &v));
        else if (name == "mu_eps") check(bp_mu_eps(r, eps_v, alpha, beta, gamma, &v));
        else if (name == "mu_bar") check(bp_mu_bar(r, alpha, beta, gamma, &v));
        else if (name == "beta_star") check(bp_beta_star(r, alpha, tol, &v));
        else if (name == "k_r") check(bp_k_r(r, eps_v, &v));
        else if (name == "theta") check(bp_theta(r, alpha, n_real, &v));
        else if (name == "beta_r_eps") check(bp_beta_r_eps(r, eps_v, &v));
        else v = bp_zeta_three_halves();
        deliver(num(v), out_path);
      };
    });

    auto* verify = thr->add_subcommand("verify", "grid check of the exponent inequalities, JSON report");
    static std::vector<int> r_set{2, 3, 4, 5, 6};
    static bp_grid grid;
    bp_grid_init(&grid);
    verify->add_option("--r", r_set, "comma separated")->delimiter(',')->capture_default_str();
    verify->add_option("--alpha-points", grid.alpha_points)->capture_default_str();
    verify->add_option("--beta-points", grid.beta_points)->capture_default_str();
    verify->add_option("--gamma-points", grid.gamma_points)->capture_default_str();
    verify->add_option("--eps-points", grid.eps_points)->capture_default_str();
    verify->add_option("--i-max", grid.i_max)->capture_default_str();
    verify->add_option("--tolerance", grid.tolerance)->capture_default_str();
    verify->add_option("--out", out_path);
    verify->callback([&] {
      action = [&] {
        char* j = nullptr;
        check(bp_verify_inequalities_json(r_set.data(), r_set.size(), &grid, &j));
        deliver(take(j), out_path);
      };
    });
  }

  // ---- branching process
  auto* bp = app.add_subcommand("bp", "time-varying branching process");
  bp->require_subcommand(1);
  std::uint64_t trials = 10000, rng_seed = 0;
  unsigned threads = 0;
  {
    auto* survive = bp->add_subcommand("survive", "survival probability; JSON, or CSV over several --eps");
    static std::vector<double> eps_list;
    static bp_walk_policy policy;
    static bool exact = false;
    bp_walk_policy_init(&policy);
    survive->add_option("--r", r)->required();
    survive->add_option("--eps", eps_list, "one or more values")->required()->delimiter(',');
    survive->add_option("--trials", trials)->capture_default_str();
    survive->add_option("--seed", rng_seed);
    survive->add_option("--threads", threads, "0 = all cores");
    survive->add_option("--c1", policy.c1, "survival declared from t >= c1 k_r")->capture_default_str();
    survive->add_option("--margin", policy.margin, "... once X_t >= margin")->capture_default_str();
    survive->add_option("--max-steps", policy.max_steps)->capture_default_str();
    survive->add_flag("--exact", exact, "also report the policy probability by dynamic programming");
    add_output(survive, "json");
    survive->callback([&] {
      action = [&] {
        std::string csv = "r,eps,trials,survivors,p_hat,stderr,asymptotic" + std::string(exact ? ",policy_exact" : "") + "\n";
        std::string json = eps_list.size() > 1 ? "[" : "";
        for (std::size_t e = 0; e < eps_list.size(); ++e) {
          bp_survival s{};
          check(bp_survival_mc(r, eps_list[e], trials, rng_seed, &policy, threads, &s));
          double pe = 0;
          if (exact) check(bp_survival_policy_exact(r, eps_list[e], &policy, &pe));
          char* j = nullptr;
          check(bp_survival_json(&s, &j));
          std::string obj = take(j);
          if (exact) obj.insert(obj.size() - 1, ",\"policy_exact\":" + num(pe));
          json += (e ? "," : "") + obj;
          csv += std::to_string(r) + "," + num(s.eps) + "," + std::to_string(s.trials) + "," +
                 std::to_string(s.survivors) + "," + num(s.p_hat) + "," + num(s.stderr_) + "," + num(s.asymptotic) +
                 (exact ? "," + num(pe) : "") + "\n";
        }
        if (eps_list.size() > 1) json += "]";
        deliver(format_or(BP_FORMAT_JSON) == BP_FORMAT_CSV ? csv : json, out_path);
      };
    });

    auto* hit = bp->add_subcommand("hit", "P(S_t = k, Y_t = i for some t); exact, or Monte Carlo with --mc");
    static bool mc = false;
    hit->add_option("--r", r)->required();
    hit->add_option("--eps", eps_v)->required();
    hit->add_option("--k", k)->required();
    hit->add_option("--i", i, "omit with --mc for the whole table up to k");
    hit->add_flag("--mc", mc);
    hit->add_option("--trials", trials)->capture_default_str();
    hit->add_option("--seed", rng_seed);
    hit->add_option("--threads", threads);
    add_output(hit, "json");
    hit->callback([&] {
      action = [&] {
        if (!mc) {
          double v = 0;
          check(bp_hitting_exact(r, eps_v, k, i, &v));
          deliver("{\"r\":" + std::to_string(r) + ",\"eps\":" + num(eps_v) + ",\"k\":" + std::to_string(k) +
                      ",\"i\":" + std::to_string(i) + ",\"exact\":" + num(v) + "}",
                  out_path);
          return;
        }
        char* t = nullptr;
        check(bp_hitting_mc(r, eps_v, k, trials, rng_seed, threads, format_or(BP_FORMAT_JSON), &t));
        deliver(take(t), out_path);
      };
    });
  }

  // ---- spectral
  auto* spec = app.add_subcommand("spectral", "Perron eigenvalue of the counting recursion");
  spec->require_subcommand(1);
  {
    auto* lambda = spec->add_subcommand("lambda", "JSON {r, ell, method, lambda, iterations, residual}");
    static std::string method = "dlambda";
    lambda->add_option("--r", r)->required();
    lambda->add_option("--ell", ell)->required();
    lambda->add_option("--method", method)->check(CLI::IsMember({"psi", "dlambda"}))->capture_default_str();
    lambda->add_option("--tol", tol, "0 = method default");
    lambda->add_option("--out", out_path);
    lambda->callback([&] {
      action = [&] {
        char* j = nullptr;
        check(bp_lambda_json(r, ell, method == "psi" ? BP_METHOD_PSI : BP_METHOD_DLAMBDA, tol, &j));
        deliver(take(j), out_path);
      };
    });
  }

  // ---- G(n, p) experiments
  auto* gnp = app.add_subcommand("gnp", "experiments on G(n, p) with p = theta_r(alpha, n) or explicit p");
  gnp->require_subcommand(1);
  static bp_experiment_config cfg;
  bp_experiment_config_init(&cfg);
  static std::optional<double> g_alpha, g_p;
  static std::string seed_policy = "random", exposure = "graph";
  static std::vector<double> alphas;
  auto add_common = [&](CLI::App* cmd, bool with_r) {
    cmd->add_option("--n", cfg.n)->required();
    if (with_r) cmd->add_option("--r", cfg.r)->capture_default_str();
    auto* a = cmd->add_option("--alpha", g_alpha, "p = (alpha / (n log^(r-1) n))^(1/r)");
    auto* p = cmd->add_option("--p", g_p, "explicit edge probability");
    a->excludes(p);
    cmd->add_option("--trials", cfg.trials)->capture_default_str();
    cmd->add_option("--seed", cfg.rng_seed)->capture_default_str();
    cmd->add_option("--threads", cfg.threads, "0 = all cores");
    add_output(cmd, "csv");
  };
  auto resolve = [&] {
    if (g_alpha.has_value() == g_p.has_value()) throw Failure{BP_ERR_INVALID_ARGUMENT, "give exactly one of --alpha, --p"};
    cfg.use_alpha = g_alpha.has_value();
    cfg.alpha = g_alpha.value_or(0);
    cfg.p = g_p.value_or(0);
    cfg.seed_policy = seed_policy == "all" ? BP_SEEDS_ALL : BP_SEEDS_RANDOM;
    cfg.exposure = exposure == "lazy" ? BP_EXPOSURE_LAZY : BP_EXPOSURE_GRAPH;
  };
  auto add_seeding = [&](CLI::App* cmd) {
    cmd->add_option("--seed-policy", seed_policy, "all or random r-sets per graph")
        ->check(CLI::IsMember({"all", "random"}))
        ->capture_default_str();
    cmd->add_option("--seeds-per-graph", cfg.seeds_per_graph)->capture_default_str();
    cmd->add_option("--exposure", exposure, "graph: sample whole graphs; lazy: one seed per trial, edges on demand")
        ->check(CLI::IsMember({"graph", "lazy"}))
        ->capture_default_str();
    cmd->add_option("--subset-cap", cfg.subset_cap)->capture_default_str();
  };
  {
    auto* sample = gnp->add_subcommand("sample", "write one G(n, p) as an edge list");
    add_common(sample, true);
    sample->callback([&] {
      action = [&] {
        resolve();
        double p = cfg.p;
        if (cfg.use_alpha) check(bp_theta(cfg.r, cfg.alpha, static_cast<double>(cfg.n), &p));
        GraphHandle g;
        check(bp_sample_gnp(cfg.n, p, cfg.rng_seed, &g.g));
        if (out_path.empty()) throw Failure{BP_ERR_INVALID_ARGUMENT, "gnp sample needs --out"};
        check(bp_graph_write(g.g, out_path.c_str()));
      };
    });

    auto* pki = gnp->add_subcommand(
        "pki", "frequency that the infected set passes through |V_t| = k, |I_t| = i.\n"
               "CSV columns: k,i,hits,seed_runs,frequency,stderr,comparator; rows with i = 0 total over i;\n"
               "comparator is the branching-process hitting probability at eps = n p^r");
    add_common(pki, true);
    add_seeding(pki);
    pki->add_option("--k-min", cfg.k_min, "0 = r + 1");
    pki->add_option("--k-max", cfg.k_max)->capture_default_str();
    pki->callback([&] {
      action = [&] {
        resolve();
        char* t = nullptr;
        check(bp_estimate_pki(&cfg, format_or(BP_FORMAT_CSV), &t));
        deliver(take(t), out_path);
      };
    });

    auto* terminal = gnp->add_subcommand(
        "terminal", "distribution of the final (|V_tau|, |I_tau|).\nCSV columns: k,i,count,seed_runs,frequency");
    add_common(terminal, true);
    add_seeding(terminal);
    terminal->callback([&] {
      action = [&] {
        resolve();
        char* t = nullptr;
        check(bp_terminal_frequency(&cfg, format_or(BP_FORMAT_CSV), &t));
        deliver(take(t), out_path);
      };
    });

    auto* sweep = gnp->add_subcommand(
        "seed-edge-sweep",
        "r = 2, p = sqrt(alpha / (n log n)); does some edge percolate?\nCSV columns: alpha,p,trials,successes,frequency,stderr");
    sweep->add_option("--n", cfg.n)->required();
    sweep->add_option("--alphas", alphas, "comma separated")->required()->delimiter(',');
    sweep->add_option("--trials", cfg.trials)->capture_default_str();
    sweep->add_option("--seed", cfg.rng_seed)->capture_default_str();
    sweep->add_option("--threads", cfg.threads);
    add_output(sweep, "csv");
    sweep->callback([&] {
      action = [&] {
        char* t = nullptr;
        check(bp_seed_edge_sweep(cfg.n, alphas.data(), alphas.size(), cfg.trials, cfg.rng_seed, cfg.threads,
                                 format_or(BP_FORMAT_CSV), &t));
        deliver(take(t), out_path);
      };
    });

    auto* susc = gnp->add_subcommand(
        "susceptibility-sweep",
        "is G(n, theta_r(alpha, n)) susceptible, and how far do seeds spread?\n"
        "CSV columns: alpha,p,trials,susceptible,susceptible_frequency,susceptible_stderr,spread_mean,spread_max\n"
        "(spread is the largest infected set over log n; susceptibility columns are empty for random seeds)");
    static bp_susceptibility_config scfg;
    bp_susceptibility_config_init(&scfg);
    susc->add_option("--n", scfg.n)->capture_default_str();
    susc->add_option("--r", scfg.r)->capture_default_str();
    susc->add_option("--alphas", alphas, "comma separated")->required()->delimiter(',');
    susc->add_option("--trials", scfg.trials)->capture_default_str();
    susc->add_option("--seed", scfg.rng_seed)->capture_default_str();
    susc->add_option("--threads", scfg.threads);
    static std::string susc_policy = "all";
    susc->add_option("--seed-policy", susc_policy, "all r-sets, or --seeds-per-graph random ones")
        ->check(CLI::IsMember({"all", "random"}))
        ->capture_default_str();
    susc->add_option("--seeds-per-graph", scfg.seeds_per_graph)->capture_default_str();
    susc->add_option("--subset-cap", scfg.subset_cap)->capture_default_str();
    add_output(susc, "csv");
    susc->callback([&] {
      action = [&] {
        scfg.seed_policy = susc_policy == "all" ? BP_SEEDS_ALL : BP_SEEDS_RANDOM;
        char* t = nullptr;
        check(bp_susceptibility_sweep(&scfg, alphas.data(), alphas.size(), format_or(BP_FORMAT_CSV), &t));
        deliver(take(t), out_path);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (action) action();
  } catch (const Failure& f) {
    std::cerr << "bootperc: " << bp_status_name(f.status) << ": " << f.message << "\n";
    const bool config = f.status == BP_ERR_DOMAIN || f.status == BP_ERR_INVALID_ARGUMENT ||
                        f.status == BP_ERR_CAP_EXCEEDED || f.status == BP_ERR_MISSING_ENTRY;
    return config ? kExitConfig : kExitRuntime;
  }
  return 0;
}
