/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bootperc.h"
#include "json.hpp"

using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out(s ? s : "");
  bp_free_string(s);
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bootperc_capi_" + name)).string();
}

}  // namespace

TEST(CApi, StatusNamesAndVersion) {
  EXPECT_STREQ(bp_status_name(BP_OK), "ok");
  EXPECT_STREQ(bp_status_name(BP_ERR_CAP_EXCEEDED), "cap_exceeded");
  EXPECT_STREQ(bp_status_name(BP_ERR_NULL_POINTER), "null_pointer");
  EXPECT_STRNE(bp_version(), "");
  bp_free_string(nullptr);
}

TEST(CApi, ErrorsCarryCodeAndMessage) {
  double v = 0;
  EXPECT_EQ(bp_critical_alpha(1, &v), BP_ERR_DOMAIN);
  EXPECT_STRNE(bp_last_error(), "");
  EXPECT_EQ(bp_critical_alpha(2, nullptr), BP_ERR_NULL_POINTER);
  EXPECT_NE(std::string(bp_last_error()).find("null"), std::string::npos);
  bp_lambda_result lr{};
  EXPECT_EQ(bp_lambda(2, 100, BP_METHOD_PSI, 0, &lr), BP_ERR_CAP_EXCEEDED);
  bp_count_table* t = nullptr;
  ASSERT_EQ(bp_count_table_build(2, 6, BP_VARIANT_EXACT, 0, 0, &t), BP_OK);
  char* s = nullptr;
  EXPECT_EQ(bp_count_table_entry(t, 9, 1, &s), BP_ERR_MISSING_ENTRY);
  EXPECT_EQ(s, nullptr);
  bp_count_table_free(t);
}

TEST(CApi, LastErrorIsPerThread) {
  double v = 0;
  ASSERT_EQ(bp_beta_r(2, -1.0, &v), BP_ERR_DOMAIN);
  const std::string mine = bp_last_error();
  std::string other;
  std::thread([&] {
    other = bp_last_error();
    bp_status_name(BP_OK);
  }).join();
  EXPECT_EQ(other, "");
  EXPECT_EQ(std::string(bp_last_error()), mine);
}

TEST(CApi, CountTable) {
  bp_count_table* t = nullptr;
  ASSERT_EQ(bp_count_table_build(2, 7, BP_VARIANT_EXACT, 0, 0, &t), BP_OK);
  EXPECT_EQ(bp_count_table_r(t), 2);
  EXPECT_EQ(bp_count_table_k_max(t), 7);
  char* s = nullptr;
  // three labelled vertices: the seed pair spans the third vertex in one way
  ASSERT_EQ(bp_count_table_entry(t, 3, 1, &s), BP_OK);
  EXPECT_EQ(take(s), "1");
  ASSERT_EQ(bp_count_table_csv(t, &s), BP_OK);
  const std::string csv = take(s);
  EXPECT_EQ(csv.rfind("r,k,i,variant,count\n", 0), 0u);

  // the brute force JSON agrees with the table row by row
  for (int k = 3; k <= 6; ++k) {
    ASSERT_EQ(bp_brute_force_count_json(2, k, 0, 0, &s), BP_OK);
    const auto j = json::parse(take(s));
    for (int i = 1; i <= k - 2; ++i) {
      ASSERT_EQ(bp_count_table_entry(t, k, i, &s), BP_OK);
      const std::string entry = take(s);
      const std::string key = std::to_string(i);
      EXPECT_EQ(j.contains(key) ? j[key].get<std::string>() : "0", entry) << k << " " << i;
    }
  }
  ASSERT_EQ(bp_normalized_json(t, 5, 2, BP_KIND_SIGMA, 0, 0, &s), BP_OK);
  const auto n = json::parse(take(s));
  EXPECT_EQ(n["kind"], "sigma");
  EXPECT_TRUE(n["log_value"].is_number());
  EXPECT_EQ(bp_normalized_json(t, 5, 2, BP_KIND_RHO_HAT, 1, 0.1, &s), BP_ERR_INVALID_ARGUMENT);
  size_t violations = 99;
  ASSERT_EQ(bp_sigma_bound_violations(t, 1e-9, &violations), BP_OK);
  EXPECT_EQ(violations, 0u);
  bp_count_table_free(t);
  bp_count_table_free(nullptr);
}

TEST(CApi, GraphLifecycleAndIo) {
  const uint32_t edges[] = {0, 1, 1, 2, 0, 2, 2, 3};
  bp_graph* g = nullptr;
  ASSERT_EQ(bp_graph_create(4, edges, 4, &g), BP_OK);
  EXPECT_EQ(bp_graph_vertex_count(g), 4u);
  EXPECT_EQ(bp_graph_edge_count(g), 4u);
  EXPECT_EQ(bp_graph_has_edge(g, 2, 1), 1);
  EXPECT_EQ(bp_graph_has_edge(g, 1, 3), 0);
  EXPECT_EQ(bp_graph_has_edge(g, 0, 99), 0);

  const std::string path = temp_path("graph.txt");
  ASSERT_EQ(bp_graph_write(g, path.c_str()), BP_OK);
  bp_graph* back = nullptr;
  ASSERT_EQ(bp_graph_read(path.c_str(), &back), BP_OK);
  EXPECT_EQ(bp_graph_edge_count(back), 4u);
  EXPECT_EQ(bp_graph_has_edge(back, 3, 2), 1);
  std::remove(path.c_str());
  EXPECT_EQ(bp_graph_read("/nonexistent/dir/graph.txt", &back), BP_ERR_IO);
  bp_graph_free(back);

  const uint32_t loop[] = {1, 1};
  bp_graph* bad = nullptr;
  EXPECT_EQ(bp_graph_create(3, loop, 1, &bad), BP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(bad, nullptr);
  bp_graph_free(g);
}

TEST(CApi, PercolationOnSmallGraphs) {
  // from seed {0, 1}: 2 joins first, then 3, then 4
  const uint32_t edges[] = {0, 2, 1, 2, 0, 3, 2, 3, 1, 4, 3, 4};
  bp_graph* g = nullptr;
  ASSERT_EQ(bp_graph_create(5, edges, 6, &g), BP_OK);
  const uint32_t seed[] = {0, 1};
  char* s = nullptr;
  ASSERT_EQ(bp_bootstrap_json(g, seed, 2, &s), BP_OK);
  const auto trace = json::parse(take(s));
  EXPECT_EQ(trace["tau"], 3);
  EXPECT_EQ(trace["levels"][1], json::array({2}));
  EXPECT_EQ(trace["levels"][2], json::array({3}));
  EXPECT_EQ(trace["levels"][3], json::array({4}));
  // 0-2-3 is a triangle, so the triangle-free witness cannot reach level 2
  ASSERT_EQ(bp_hat_bootstrap_json(g, seed, 2, 0, &s), BP_OK);
  EXPECT_EQ(json::parse(take(s))["tau"], 1);

  bp_verdict verdict = BP_VERDICT_UNKNOWN;
  uint32_t witness[2] = {9, 9};
  ASSERT_EQ(bp_is_susceptible(g, 2, 1, 0, 0, 0, &verdict, witness), BP_OK);
  EXPECT_EQ(verdict, BP_VERDICT_YES);
  EXPECT_LT(witness[0], witness[1]);
  int found = -1;
  ASSERT_EQ(bp_find_contagious_set(g, 2, 0, 0, &found, witness), BP_OK);
  EXPECT_EQ(found, 1);
  // no contagious pair is adjacent here
  ASSERT_EQ(bp_find_contagious_set(g, 2, 1, 0, &found, witness), BP_OK);
  EXPECT_EQ(found, 0);

  bp_graph* k4 = nullptr;
  ASSERT_EQ(bp_graph_complete(4, &k4), BP_OK);
  bp_graph* closed = nullptr;
  ASSERT_EQ(bp_graph_bootstrap_closure(k4, 3, &closed), BP_OK);
  EXPECT_EQ(bp_graph_edge_count(closed), 6u);
  EXPECT_EQ(bp_bootstrap_json(g, nullptr, 2, &s), BP_ERR_NULL_POINTER);
  bp_graph_free(closed);
  bp_graph_free(k4);
  bp_graph_free(g);
}

TEST(CApi, ThresholdScalars) {
  double a = 0, b = 0, m = 0;
  ASSERT_EQ(bp_critical_alpha(2, &a), BP_OK);
  EXPECT_NEAR(a, 0.25, 1e-15);
  ASSERT_EQ(bp_beta_r(2, a, &b), BP_OK);
  EXPECT_NEAR(b, 4.0, 1e-14);
  ASSERT_EQ(bp_mu(2, 0.25, 4, 0.5, &m), BP_OK);
  EXPECT_NEAR(m, -0.5, 1e-12);
  double bs = 0;
  ASSERT_EQ(bp_beta_star(2, 0.3, 0, &bs), BP_OK);
  EXPECT_GT(bs, 4.0);
  double ms = 1;
  ASSERT_EQ(bp_mu_star(2, 0.3, bs, &ms), BP_OK);
  EXPECT_NEAR(ms, 0, 1e-9);
  EXPECT_NEAR(bp_zeta_three_halves(), 2.612375348685488, 1e-13);
  char* s = nullptr;
  ASSERT_EQ(bp_threshold_params_json(3, 0.4, 1e6, &s), BP_OK);
  const auto p = json::parse(take(s));
  EXPECT_EQ(p["alpha_H"].size(), 4u);
  double theta = 0;
  ASSERT_EQ(bp_theta(3, 0.4, 1e6, &theta), BP_OK);
  EXPECT_DOUBLE_EQ(p["p"].get<double>(), theta);
}

TEST(CApi, VerifierReports) {
  bp_grid grid;
  bp_grid_init(&grid);
  EXPECT_EQ(grid.i_max, 500);
  grid.alpha_points = 3;
  grid.beta_points = 5;
  grid.gamma_points = 5;
  grid.eps_points = 3;
  grid.i_max = 40;
  const int rs[] = {2, 3};
  char* s = nullptr;
  ASSERT_EQ(bp_verify_inequalities_json(rs, 2, &grid, &s), BP_OK);
  const auto report = json::parse(take(s));
  ASSERT_EQ(report.size(), 5u);
  for (const auto& claim : report) {
    EXPECT_GT(claim["grid_size"].get<int>(), 0);
    EXPECT_TRUE(claim["violations"].empty()) << claim["claim_id"];
  }
  ASSERT_EQ(bp_verify_lambda_series_json(30, 1e-15, &s), BP_OK);
  const auto rows = json::parse(take(s));
  ASSERT_EQ(rows.size(), 30u);
  for (const auto& row : rows) EXPECT_TRUE(row["holds"].get<bool>());
  ASSERT_EQ(bp_verify_induction_json(30, 1e-15, &s), BP_OK);
  for (const auto& row : json::parse(take(s))) EXPECT_TRUE(row["holds"].get<bool>());
}

TEST(CApi, BranchingProcess) {
  bp_walk_policy policy;
  bp_walk_policy_init(&policy);
  EXPECT_EQ(policy.margin, 50);
  bp_survival a{}, b{};
  ASSERT_EQ(bp_survival_mc(3, 0.2, 2000, 5, &policy, 1, &a), BP_OK);
  ASSERT_EQ(bp_survival_mc(3, 0.2, 2000, 5, nullptr, 3, &b), BP_OK);
  EXPECT_EQ(a.survivors, b.survivors);
  EXPECT_EQ(a.trials, 2000u);
  double exact = 0;
  ASSERT_EQ(bp_survival_policy_exact(3, 0.2, &policy, &exact), BP_OK);
  EXPECT_NEAR(a.p_hat, exact, 5 * std::sqrt(exact * (1 - exact) / 2000) + 1e-3);
  char* s = nullptr;
  ASSERT_EQ(bp_survival_json(&a, &s), BP_OK);
  const auto j = json::parse(take(s));
  EXPECT_DOUBLE_EQ(j["p_hat"].get<double>(), a.p_hat);
  EXPECT_TRUE(j.contains("stderr"));
  EXPECT_TRUE(j.contains("asymptotic"));

  double psi = 0;
  ASSERT_EQ(bp_hitting_exact(2, 0.1, 3, 1, &psi), BP_OK);
  EXPECT_NEAR(psi, 0.1 * std::exp(-0.1), 1e-15);
  ASSERT_EQ(bp_hitting_mc(2, 0.3, 5, 4000, 1, 2, BP_FORMAT_CSV, &s), BP_OK);
  std::istringstream csv(take(s));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "k,i,hits,trials,frequency,stderr,exact");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 1 + 2 + 3);
  ASSERT_EQ(bp_hitting_mc(2, 0.3, 5, 4000, 1, 2, BP_FORMAT_JSON, &s), BP_OK);
  EXPECT_EQ(json::parse(take(s))["rows"].size(), 6u);

  ASSERT_EQ(bp_simulate_generations_json(2, 0.5, 3, 60, &s), BP_OK);
  const auto gens = json::parse(take(s));
  ASSERT_FALSE(gens.empty());
  EXPECT_EQ(gens[0], json::array({2, 2}));
  ASSERT_EQ(bp_simulate_walk_json(2, 0.0, 1, nullptr, &s), BP_OK);
  const auto walk = json::parse(take(s));
  EXPECT_FALSE(walk["survived"].get<bool>());
  EXPECT_EQ(walk["reason"], "extinct");
}

TEST(CApi, Spectral) {
  bp_lambda_result psi{}, dl{};
  ASSERT_EQ(bp_lambda(2, 10, BP_METHOD_PSI, 0, &psi), BP_OK);
  ASSERT_EQ(bp_lambda(2, 10, BP_METHOD_DLAMBDA, 0, &dl), BP_OK);
  EXPECT_NEAR(psi.lambda, dl.lambda, 1e-8);
  EXPECT_NEAR(dl.lambda, 0.968596, 1e-6);
  EXPECT_LT(psi.lift_residual, 1e-8);
  EXPECT_LT(dl.lift_residual, 1e-8);
  char* s = nullptr;
  ASSERT_EQ(bp_lambda_json(3, 5, BP_METHOD_PSI, 0, &s), BP_OK);
  const auto j = json::parse(take(s));
  EXPECT_EQ(j["r"], 3);
  EXPECT_EQ(j["ell"], 5);
  EXPECT_TRUE(j.contains("iterations"));
  EXPECT_EQ(bp_lambda(2, 5, static_cast<bp_lambda_method>(7), 0, &dl), BP_ERR_INVALID_ARGUMENT);
}

TEST(CApi, Experiments) {
  bp_experiment_config cfg;
  bp_experiment_config_init(&cfg);
  cfg.n = 400;
  cfg.r = 2;
  cfg.use_alpha = 1;
  cfg.alpha = 0.125;
  cfg.trials = 50;
  cfg.rng_seed = 9;
  cfg.k_max = 6;
  cfg.threads = 2;
  char* s = nullptr;
  ASSERT_EQ(bp_estimate_pki(&cfg, BP_FORMAT_CSV, &s), BP_OK);
  const std::string first = take(s);
  EXPECT_EQ(first.rfind("k,i,hits,seed_runs,frequency,stderr,comparator\n", 0), 0u);
  cfg.threads = 1;
  ASSERT_EQ(bp_estimate_pki(&cfg, BP_FORMAT_CSV, &s), BP_OK);
  EXPECT_EQ(take(s), first);
  ASSERT_EQ(bp_estimate_pki(&cfg, BP_FORMAT_JSON, &s), BP_OK);
  EXPECT_NO_THROW(json::parse(take(s)));

  cfg.use_alpha = 0;
  cfg.p = 0;
  ASSERT_EQ(bp_terminal_frequency(&cfg, BP_FORMAT_CSV, &s), BP_OK);
  EXPECT_NE(take(s).find("2,2,50,50,1\n"), std::string::npos);

  cfg.seed_policy = BP_SEEDS_ALL;
  cfg.n = 100000;
  EXPECT_EQ(bp_estimate_pki(&cfg, BP_FORMAT_CSV, &s), BP_ERR_CAP_EXCEEDED);

  const double alphas[] = {0.05, 5.0};
  ASSERT_EQ(bp_seed_edge_sweep(2000, alphas, 2, 20, 4, 0, BP_FORMAT_CSV, &s), BP_OK);
  EXPECT_EQ(take(s).rfind("alpha,p,trials,successes,frequency,stderr\n", 0), 0u);

  bp_susceptibility_config sc;
  bp_susceptibility_config_init(&sc);
  EXPECT_EQ(sc.seed_policy, BP_SEEDS_ALL);
  sc.n = 60;
  sc.trials = 5;
  ASSERT_EQ(bp_susceptibility_sweep(&sc, alphas, 2, BP_FORMAT_JSON, &s), BP_OK);
  EXPECT_EQ(json::parse(take(s)).size(), 2u);

  bp_graph* g = nullptr;
  ASSERT_EQ(bp_sample_gnp(50, 1.0, 1, &g), BP_OK);
  EXPECT_EQ(bp_graph_edge_count(g), 50u * 49 / 2);
  bp_graph_free(g);

  const std::string path = temp_path("text.txt");
  ASSERT_EQ(bp_write_text(path.c_str(), "abc"), BP_OK);
  std::ifstream in(path);
  std::string content;
  std::getline(in, content);
  EXPECT_EQ(content, "abc");
  std::remove(path.c_str());
  EXPECT_EQ(bp_write_text("/nonexistent/dir/x", "abc"), BP_ERR_IO);
}
