/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bootperc/combinatorics.hpp"
#include "bootperc/common.hpp"

namespace bootperc::branching {

// Walk form: individuals 0..r-2 have one child each, individual n >= r-1
// has Z_n ~ Poi(C(n, r-1) eps) children, and
//   X_t = sum_{n=r-1}^{t} (Z_n - 1)
// counts the unexplored individuals beyond the next one. X_t >= 0 exactly
// when individual t+1 exists.

struct WalkPolicy {
  double c1 = 4.0;              ///< survival may be declared from t >= ceil(c1 k_r)
  std::int64_t margin = 50;     ///< ... once X_t >= margin
  std::int64_t max_steps = 10'000'000;
};

enum class StopReason { extinct, survival_rule, step_cap };
std::string reason_name(StopReason reason);

struct BPOutcome {
  bool survived = false;
  std::optional<std::int64_t> extinction_time;  ///< t with X_t = -1
  std::int64_t max_alive = 1;                   ///< max over t of X_t + 1
  std::int64_t steps = 0;                       ///< last t examined
  StopReason reason = StopReason::extinct;
};

std::int64_t survival_cut(int r, double eps, const WalkPolicy& policy);

BPOutcome simulate_walk(int r, double eps, Engine& rng, const WalkPolicy& policy = {});
/// Uses stream (rng_seed, 0).
BPOutcome simulate_walk(int r, double eps, std::uint64_t rng_seed, const WalkPolicy& policy = {});

struct SurvivalEstimate {
  int r = 2;
  double eps = 0;
  std::uint64_t trials = 0;
  std::uint64_t survivors = 0;
  double p_hat = 0;
  double stderr_ = 0;
  double asymptotic = 0;  ///< exp(-((r-1)^2/r) k_r(eps))
};

/// Trial j uses stream (rng_seed, j).
SurvivalEstimate survival_probability_mc(int r, double eps, std::uint64_t trials, std::uint64_t rng_seed,
                                         const WalkPolicy& policy = {}, unsigned threads = 0);

double survival_asymptotic(int r, double eps);

/// Probability that simulate_walk declares survival, by dynamic programming
/// over X_t. States with X_t >= cut - t + margin are absorbed as survivors
/// (X drops by at most one per step), so the state space is finite. Past the
/// cut, iteration stops once the live mass is below mass_tol times the
/// absorbed survival mass, or after max_steps.
double survival_probability_policy(int r, double eps, const WalkPolicy& policy = {},
                                   double mass_tol = 1e-17);

std::string to_json(const SurvivalEstimate& estimate);

// ---------------------------------------------------------------------------
// Set-parent form: generation 0 is r individuals, and every r-subset of the
// population has Poi(eps) children. S_t is the population after generation t
// and Y_t the size of generation t (S_0 = Y_0 = r).

/// Psi_r(k, i) = exp(-eps C(k-i, r)) eps^(k-r) / (k-r)! m_r(k, i), from an
/// exact table. Requires r < k <= table.k_max(), 1 <= i <= k - r, eps >= 0.
double hitting_probability_exact(const combinatorics::CountTable& exact, double eps, int k, int i);
/// Builds the exact table up to k.
double hitting_probability_exact(int r, double eps, int k, int i);

struct Generation {
  std::int64_t s = 0;
  std::int64_t y = 0;
};

/// (S_t, Y_t) for t = 0, 1, ... while Y_t > 0 and S_t < k_cap; a trailing
/// generation of size 0 is not recorded.
std::vector<Generation> simulate_generations(int r, double eps, Engine& rng, std::int64_t k_cap = 60);
std::vector<Generation> simulate_generations(int r, double eps, std::uint64_t rng_seed,
                                             std::int64_t k_cap = 60);

struct HittingTally {
  int r = 2;
  double eps = 0;
  int k_max = 0;
  std::uint64_t trials = 0;
  std::map<std::pair<int, int>, std::uint64_t> hits;  ///< (k, i) -> runs with S_t = k, Y_t = i
  std::vector<std::uint64_t> reached;                 ///< [k] -> runs with some S_t >= k

  double frequency(int k, int i) const;
  double stderr_of(int k, int i) const;
  double reach_frequency(int k) const;
};

/// Runs simulate_generations with cap k_max + 1 for each trial (stream
/// (rng_seed, j)) and tallies hitting events for k <= k_max.
HittingTally hitting_frequency_mc(int r, double eps, int k_max, std::uint64_t trials, std::uint64_t rng_seed,
                                  unsigned threads = 0);

}  // namespace bootperc::branching
