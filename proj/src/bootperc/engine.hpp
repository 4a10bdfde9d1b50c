/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bootperc/common.hpp"

namespace bootperc::engine {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected graph in compressed sparse rows. Immutable.
class Graph {
 public:
  Graph() = default;
  /// Duplicate edges are merged; self-loops and out-of-range endpoints throw.
  Graph(std::size_t n, std::span<const Edge> edges);

  static Graph complete(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return adj_.size() / 2; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(Vertex u, Vertex v) const;
  /// Edges as (u, v) with u < v in increasing order.
  std::vector<Edge> edges() const;

  bool operator==(const Graph& other) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adj_;  // sorted within each row
};

struct PercolationTrace {
  std::vector<Vertex> seed;
  std::vector<std::vector<Vertex>> levels;  ///< levels[0] is the seed, each level sorted
  std::optional<std::vector<Edge>> witness_edges;
  bool lower_bound_only = false;  ///< witness search ran out of budget

  int tau() const { return static_cast<int>(levels.size()) - 1; }
  std::size_t infected() const;
  std::vector<Vertex> infected_set() const;
};

/// Reusable synchronous r-neighbour percolation workspace. Per-run cost is
/// proportional to the edges touched, not to n.
class Percolator {
 public:
  using LevelSink = std::function<void(int t, std::span<const Vertex> level, std::size_t cumulative)>;

  struct Summary {
    std::size_t infected = 0;
    int tau = 0;
    bool truncated = false;  ///< stopped because the infected set grew past stop_above
  };

  explicit Percolator(std::size_t n = 0) { resize(n); }
  void resize(std::size_t n);

  /// Runs from the seed, reporting every level (t = 0 is the seed).
  /// If stop_above > 0 the run halts once more than stop_above are infected.
  Summary run(const Graph& g, std::span<const Vertex> seed, int r, const LevelSink& sink = nullptr,
              std::size_t stop_above = 0);

  PercolationTrace trace(const Graph& g, std::span<const Vertex> seed, int r);

 private:
  void reset();

  std::vector<std::uint32_t> hits_;
  std::vector<std::uint8_t> infected_;
  std::vector<Vertex> touched_;
  std::vector<Vertex> frontier_;
  std::vector<Vertex> next_;
};

/// Throws ErrorCode::invalid_argument for wrong size, duplicates or range.
void validate_seed(const Graph& g, std::span<const Vertex> seed, int r);

PercolationTrace bootstrap(const Graph& g, std::span<const Vertex> seed, int r);

// ---------------------------------------------------------------------------

enum class Verdict { yes, no, unknown };

struct SusceptibilityOptions {
  bool exhaustive = true;
  std::uint64_t samples = 0;     ///< sampled mode: number of uniform r-sets
  std::uint64_t rng_seed = 0;
  std::uint64_t cap = 50'000'000;  ///< exhaustive mode: bound on C(n, r)
};

struct SusceptibilityResult {
  Verdict verdict = Verdict::no;
  std::vector<Vertex> witness;
  std::uint64_t seeds_tested = 0;
};

/// Exhaustive mode tries r-cliques first and then the remaining r-sets in
/// lexicographic order; sampled mode answers yes or unknown.
SusceptibilityResult is_susceptible(const Graph& g, int r, const SusceptibilityOptions& options = {});

/// Closure under K_k completion: repeatedly add uv whenever u and v have k-2
/// common neighbours forming a clique.
Graph graph_bootstrap_closure(const Graph& g, int k);

/// First r-clique (lexicographic) that is a contagious set.
std::optional<std::vector<Vertex>> has_seed(const Graph& g, int r);

/// First r-set (lexicographic) spanning at least min_edges edges that is a
/// contagious set. min_edges = C(r,2) is has_seed.
std::optional<std::vector<Vertex>> find_contagious_set(const Graph& g, int r, int min_edges,
                                                       std::uint64_t cap = 50'000'000);

inline constexpr std::uint64_t kDefaultNodeBudget = 1'000'000;

/// Longest prefix of the r-bootstrap trace whose infected sets are all
/// witnessed by one triangle-free subgraph in which every non-seed vertex
/// keeps r parents from earlier levels. Parent sets are searched
/// lexicographically by (level, vertex id), so the witness is deterministic.
PercolationTrace hat_bootstrap(const Graph& g, std::span<const Vertex> seed, int r,
                               std::uint64_t node_budget = kDefaultNodeBudget);

// ---------------------------------------------------------------------------
// I/O

/// First line: JSON header {"n":..,"edges":..}; then one `u v` line per edge.
void write_edge_list(const Graph& g, std::ostream& out);
Graph read_edge_list(std::istream& in);

/// {"seed":[..],"levels":[[..],..],"tau":..,"witness_edges":[[u,v],..]}
std::string trace_to_json(const PercolationTrace& trace);

}  // namespace bootperc::engine
