/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bootperc/common.hpp"

namespace bootperc::combinatorics {

// Counting of minimally susceptible graphs.
//
// A graph on [k] is minimally susceptible with seed [r] when r-bootstrap
// percolation from [r] infects every vertex and the graph has exactly
// r(k - r) edges. Equivalently every non-seed vertex has exactly r neighbours
// in strictly earlier levels and there are no other edges. m_r(k, i) counts
// these graphs by the size i of the top (last) level.

enum class Variant {
  exact,                ///< m_r(k, i)
  triangle_free_lower,  ///< lower bound on the triangle-free count
  level_bounded,        ///< lower bound restricted to level sizes <= level_bound
};

/// Number of r-subsets of an x-set that meet a fixed y-subset:
/// C(x, r) - C(x - y, r). Requires x >= r >= 2 and 0 <= y <= x.
BigInt a_count(int r, std::int64_t x, std::int64_t y);

/// a_count minus the 2 r y x^(r-2) parent choices that may close a triangle,
/// clamped at zero.
BigInt hat_a_count(int r, std::int64_t x, std::int64_t y);

/// Both sides of (r-1)!/x^(r-1) * a/y = (1/y) sum_{l=1..y} (x-l)_(r-1) / x^(r-1),
/// with (m)_s the falling factorial. power_average replaces (x-l)_(r-1) by
/// (x-l)^(r-1); it agrees for r = 2 and is an upper bound otherwise.
struct LabelIdentity {
  double lhs = 0;
  double rhs = 0;
  double relative_error = 0;
  double power_average = 0;
};
LabelIdentity label_identity(int r, std::int64_t x, std::int64_t y);

inline constexpr std::uint64_t kDefaultMemoryBudget = 2ull << 30;

struct TableOptions {
  Variant variant = Variant::exact;
  int level_bound = 0;  ///< used by Variant::level_bounded only; must be >= r
  std::uint64_t memory_budget_bytes = kDefaultMemoryBudget;
};

/// Immutable table of counts for r < k <= k_max and 1 <= i <= k - r.
class CountTable {
 public:
  int r() const noexcept { return r_; }
  int k_max() const noexcept { return k_max_; }
  Variant variant() const noexcept { return variant_; }
  int level_bound() const noexcept { return level_bound_; }

  bool contains(int k, int i) const noexcept;
  /// Throws ErrorCode::missing_entry outside the table.
  const BigInt& at(int k, int i) const;
  BigInt total(int k) const;

  std::string variant_name() const;
  /// CSV with header `r,k,i,variant,count`.
  std::string to_csv() const;
  std::uint64_t footprint_bytes() const noexcept { return bytes_; }

 private:
  friend CountTable build_count_table(int r, int k_max, const TableOptions& options);

  int r_ = 0;
  int k_max_ = 0;
  Variant variant_ = Variant::exact;
  int level_bound_ = 0;
  std::uint64_t bytes_ = 0;
  std::vector<std::vector<BigInt>> rows_;  // rows_[k - r - 1][i - 1]
};

/// Fills the table bottom-up from m(k, k - r) = 1 with the top-level removal
/// recurrence. Throws ErrorCode::resource past the memory budget.
CountTable build_count_table(int r, int k_max, const TableOptions& options = {});

// ---------------------------------------------------------------------------
// Exhaustive oracle

inline constexpr std::uint64_t kDefaultBruteForceCap = 50'000'000;

struct BruteForceOptions {
  bool triangle_free = false;
  std::uint64_t cap = kDefaultBruteForceCap;  ///< bound on C(k-1, r)^(k-r)
};

/// Visits each labelled minimally susceptible graph on [k] with seed [r] once.
/// The graph is given as per-vertex adjacency bit masks.
void for_each_minimally_susceptible(int r, int k, std::uint64_t cap,
                                    const std::function<void(std::span<const std::uint32_t>)>& visit);

/// Counts by top-level size, found by letting every non-seed vertex choose r
/// neighbours among all other vertices, deduplicating edge sets and keeping
/// those that percolate from [r].
std::map<int, BigInt> brute_force_count(int r, int k, const BruteForceOptions& options = {});

// ---------------------------------------------------------------------------
// Normalized counts

enum class NormalizedKind { sigma, rho_hat };

struct NormalizedCount {
  int r = 0;
  int k = 0;
  int i = 0;
  NormalizedKind kind = NormalizedKind::sigma;
  std::optional<double> eps;
  HighReal log_value;

  double log() const { return static_cast<double>(log_value); }
  double value() const { return static_cast<double>(exp(log_value)); }
};

/// sigma:   m(k,i)/(k-r)! * ((r-1)!/k^(r-1))^k            from an exact table
/// rho_hat: m^(k,i)/(k-r)! * ((r-1)!/((k-i) k^(r-2)))^k   from a triangle-free table
NormalizedCount normalized(const CountTable& table, int k, int i, NormalizedKind kind,
                           std::optional<double> eps = std::nullopt);

std::string kind_name(NormalizedKind kind);
/// JSON record {r,k,i,kind,log_value}.
std::string to_json(const NormalizedCount& value);

/// Limit entry A_r(i, j) = j^i e^(-(r-1) i) / i!.
HighReal a_entry(int r, int i, int j);
/// Finite-k entry A_r(k, i, j); requires i < k - r and j <= k - r - i.
HighReal a_entry(int r, int i, int j, int k);

// ---------------------------------------------------------------------------
// Numeric verifiers

struct BoundViolation {
  int r = 0;
  int k = 0;
  int i = 0;
  double log_sigma = 0;
  double log_bound = 0;
};

/// Checks sigma_r(k,i) <= i^(-1/2) e^(-i-(r-2)k) for every entry of an exact
/// table, allowing the given relative slack.
std::vector<BoundViolation> check_sigma_upper_bound(const CountTable& exact, double relative_slack);

struct InductionRow {
  int i = 0;
  double log_lhs = 0;
  double log_rhs = 0;
  int terms = 0;           ///< series truncation point
  double tail_bound = 0;   ///< relative bound on the discarded tail
  bool holds = false;
};

/// sum_j j^i e^-i / i! * j^(-1/2) e^-j <= i^(-1/2) e^-i for i = 1..i_max, with
/// the series cut once a ratio-test tail bound drops below tail_tolerance.
std::vector<InductionRow> verify_induction_series(int i_max, double tail_tolerance = 1e-15);

}  // namespace bootperc::combinatorics
