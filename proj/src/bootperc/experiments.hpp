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

#include "bootperc/common.hpp"
#include "bootperc/engine.hpp"

namespace bootperc::experiments {

using engine::Graph;
using engine::Vertex;

// ---------------------------------------------------------------------------
// Sampling

/// G(n, p) by geometric skipping over the C(n, 2) pairs in row-major order.
Graph sample_gnp(std::size_t n, double p, std::uint64_t rng_seed);
Graph sample_gnp(std::size_t n, double p, Engine& rng);

/// Pairs present at p_max, each with a mark uniform on [0, p_max). The graph
/// at any p <= p_max keeps the pairs with mark < p, which couples G(n, p)
/// monotonically across p.
struct MarkedGraph {
  std::size_t n = 0;
  double p_max = 0;
  std::vector<engine::Edge> edges;
  std::vector<double> marks;

  Graph at(double p) const;
};
MarkedGraph sample_marked(std::size_t n, double p_max, Engine& rng);

// ---------------------------------------------------------------------------
// Configuration

enum class SeedPolicy { all, random };
enum class Exposure {
  graph,  ///< sample the whole graph, then run the seeds chosen by the policy
  lazy,   ///< one seed per trial; edges revealed as vertices become infected
};

struct ExperimentConfig {
  std::size_t n = 1000;
  int r = 2;
  std::optional<double> alpha;  ///< p = theta_r(alpha, n) when set
  std::optional<double> p;      ///< explicit edge probability otherwise
  std::uint64_t trials = 200;   ///< graphs (graph exposure) or seeds (lazy)
  std::uint64_t rng_seed = 0;
  SeedPolicy seed_policy = SeedPolicy::random;
  std::uint64_t seeds_per_graph = 1;  ///< random policy only
  Exposure exposure = Exposure::graph;
  int k_min = 0;  ///< 0 means r + 1
  int k_max = 12;
  std::uint64_t subset_cap = 5'000'000;  ///< bound on C(n, r) for the all policy
  unsigned threads = 0;                  ///< 0 means hardware concurrency
};

/// Resolved edge probability; checks the configuration.
double resolve_p(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// (k, i)-contagious frequencies

struct PkiEstimate {
  ExperimentConfig config;
  double p = 0;
  double eps = 0;                 ///< n p^r
  std::uint64_t seed_runs = 0;    ///< denominator of every frequency
  std::map<std::pair<int, int>, std::uint64_t> hits;  ///< some t with |V_t| = k, |I_t| = i
  std::map<int, std::uint64_t> hits_k;                ///< some t with |V_t| = k
  std::map<std::pair<int, int>, double> comparator;   ///< e^{-eps C(k-i,r)} eps^{k-r}/(k-r)! m_r(k,i)
  std::vector<std::string> warnings;
  double expected_count_scale = 0;  ///< C(n, r): multiply a frequency by this for E_r

  double frequency(int k, int i) const;
  double stderr_of(int k, int i) const;
  double frequency_k(int k) const;
};

/// Comparator entries come from exact count tables; above k = 40 they are
/// omitted with a warning.
PkiEstimate estimate_Pki(const ExperimentConfig& config);

struct TerminalEstimate {
  ExperimentConfig config;
  double p = 0;
  std::uint64_t seed_runs = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> counts;  ///< (|V_tau|, |I_tau|)

  double frequency(std::size_t k, std::size_t i) const;
};

TerminalEstimate terminal_set_frequency(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Sweeps. Every trial samples one marked graph at the largest p of the sweep
// and thresholds it for each alpha, so statistics are monotone per trial.

struct SweepRow {
  double alpha = 0;
  double p = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double frequency = 0;
  double stderr_ = 0;
};

/// r = 2, p = sqrt(alpha / (n log n)); success = the graph has a seed edge.
std::vector<SweepRow> seed_edge_sweep(std::size_t n, const std::vector<double>& alphas, std::uint64_t trials,
                                      std::uint64_t rng_seed, unsigned threads = 0);

struct SusceptibilityRow {
  double alpha = 0;
  double p = 0;
  std::uint64_t trials = 0;
  std::optional<std::uint64_t> susceptible;  ///< all-seed policy only
  std::vector<double> max_spread_over_log_n;  ///< per trial
  double susceptible_frequency() const;
  double susceptible_stderr() const;
  double spread_mean() const;
};

struct SusceptibilityConfig {
  std::size_t n = 2000;
  int r = 2;
  std::vector<double> alphas;
  std::uint64_t trials = 200;
  std::uint64_t rng_seed = 0;
  SeedPolicy seed_policy = SeedPolicy::all;
  std::uint64_t seeds_per_graph = 1000;  ///< random policy
  std::uint64_t subset_cap = 5'000'000;  ///< all policy: bound on C(n, r)
  unsigned threads = 0;
};

/// All policy: r-sets spanning cliques first, then the rest, stopping at the
/// first contagious set; random policy: uniform r-sets, shared across alpha.
std::vector<SusceptibilityRow> susceptibility_sweep(const SusceptibilityConfig& config);

// ---------------------------------------------------------------------------
// Output. Numbers are printed with %.17g so reruns are byte-identical.

std::string to_csv(const PkiEstimate& estimate);
std::string to_json(const PkiEstimate& estimate);
std::string to_csv(const TerminalEstimate& estimate);
std::string to_json(const TerminalEstimate& estimate);
std::string to_csv(const std::vector<SweepRow>& rows);
std::string to_json(const std::vector<SweepRow>& rows);
std::string to_csv(const std::vector<SusceptibilityRow>& rows);
std::string to_json(const std::vector<SusceptibilityRow>& rows);

/// Writes text to path, raising ErrorCode::io on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace bootperc::experiments
