/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "bootperc/combinatorics.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace bootperc::combinatorics {

namespace {

void check_label_args(int r, std::int64_t x, std::int64_t y) {
  require(r >= 2, ErrorCode::domain, "r must be at least 2");
  require(x >= r, ErrorCode::domain, "x must be at least r");
  require(y >= 0 && y <= x, ErrorCode::domain, "y must lie in [0, x]");
}

std::uint64_t entry_bytes(const BigInt& v) {
  return sizeof(BigInt) + mpz_size(v.get_mpz_t()) * sizeof(mp_limb_t);
}

HighReal log_high(const BigInt& v) {
  if (v == 0) return -std::numeric_limits<HighReal>::infinity();
  return log(to_high(v));
}

HighReal log_fact_high(std::int64_t n) { return lgamma(HighReal(n + 1)); }

}  // namespace

BigInt a_count(int r, std::int64_t x, std::int64_t y) {
  check_label_args(r, x, y);
  return binomial(x, r) - binomial(x - y, r);
}

BigInt hat_a_count(int r, std::int64_t x, std::int64_t y) {
  BigInt a = a_count(r, x, y);
  BigInt px;
  mpz_ui_pow_ui(px.get_mpz_t(), static_cast<unsigned long>(x), static_cast<unsigned long>(r - 2));
  BigInt out = a - BigInt(2 * r) * BigInt(static_cast<long>(y)) * px;
  return out > 0 ? out : BigInt(0);
}

LabelIdentity label_identity(int r, std::int64_t x, std::int64_t y) {
  check_label_args(r, x, y);
  require(y >= 1, ErrorCode::domain, "y must be at least 1");
  const HighReal hx(static_cast<double>(x));
  HighReal lhs = exp(log_fact_high(r - 1) - (r - 1) * log(hx)) * to_high(a_count(r, x, y)) / y;
  // (1/y) sum_l (x-l)_(r-1) / x^(r-1); the falling factorial makes this exact.
  HighReal rhs = 0;
  for (std::int64_t l = 1; l <= y; ++l) {
    HighReal term = 1;
    for (int t = 0; t < r - 1; ++t) term *= HighReal(static_cast<double>(x - l - t)) / hx;
    rhs += term;
  }
  rhs /= y;
  HighReal power = 0;
  for (std::int64_t l = 1; l <= y; ++l) power += pow(HighReal(static_cast<double>(x - l)) / hx, r - 1);
  power /= y;
  LabelIdentity out;
  out.power_average = static_cast<double>(power);
  out.lhs = static_cast<double>(lhs);
  out.rhs = static_cast<double>(rhs);
  out.relative_error = rhs == 0 ? static_cast<double>(abs(lhs)) : static_cast<double>(abs(lhs - rhs) / abs(rhs));
  return out;
}

// ---------------------------------------------------------------------------

bool CountTable::contains(int k, int i) const noexcept {
  return k > r_ && k <= k_max_ && i >= 1 && i <= k - r_;
}

const BigInt& CountTable::at(int k, int i) const {
  if (!contains(k, i)) {
    std::ostringstream msg;
    msg << "no table entry (k=" << k << ", i=" << i << ") for r=" << r_ << ", k_max=" << k_max_;
    fail(ErrorCode::missing_entry, msg.str());
  }
  return rows_[k - r_ - 1][i - 1];
}

BigInt CountTable::total(int k) const {
  BigInt sum = 0;
  for (int i = 1; i <= k - r_; ++i) sum += at(k, i);
  return sum;
}

std::string CountTable::variant_name() const {
  switch (variant_) {
    case Variant::exact: return "exact";
    case Variant::triangle_free_lower: return "triangle_free_lower";
    case Variant::level_bounded:
      return "triangle_free_lower_level_bounded(" + std::to_string(level_bound_) + ")";
  }
  return "unknown";
}

std::string CountTable::to_csv() const {
  std::ostringstream out;
  out << "r,k,i,variant,count\n";
  const std::string name = variant_name();
  for (int k = r_ + 1; k <= k_max_; ++k)
    for (int i = 1; i <= k - r_; ++i)
      out << r_ << ',' << k << ',' << i << ',' << name << ',' << to_decimal(at(k, i)) << '\n';
  return out.str();
}

CountTable build_count_table(int r, int k_max, const TableOptions& options) {
  require(r >= 2, ErrorCode::domain, "r must be at least 2");
  require(k_max > r, ErrorCode::domain, "k_max must exceed r");
  const bool hat = options.variant != Variant::exact;
  const bool bounded = options.variant == Variant::level_bounded;
  if (bounded) require(options.level_bound >= r, ErrorCode::domain, "level bound must be at least r");
  const int ell = bounded ? options.level_bound : std::numeric_limits<int>::max();

  CountTable table;
  table.r_ = r;
  table.k_max_ = k_max;
  table.variant_ = options.variant;
  table.level_bound_ = bounded ? ell : 0;
  table.rows_.resize(static_cast<std::size_t>(k_max - r));

  auto charge = [&](std::uint64_t bytes) {
    table.bytes_ += bytes;
    if (table.bytes_ > options.memory_budget_bytes) {
      std::ostringstream msg;
      msg << "count table exceeds memory budget of " << options.memory_budget_bytes << " bytes";
      fail(ErrorCode::resource, msg.str());
    }
  };

  // labels[x][j-1] = a(x, j), or the triangle-avoiding variant
  std::vector<std::vector<BigInt>> labels(static_cast<std::size_t>(k_max + 1));
  for (int x = r + 1; x < k_max; ++x) {
    auto& row = labels[x];
    row.reserve(static_cast<std::size_t>(x - r));
    for (int j = 1; j <= x - r; ++j) row.push_back(hat ? hat_a_count(r, x, j) : a_count(r, x, j));
  }

  BigInt power;
  BigInt sum;
  for (int k = r + 1; k <= k_max; ++k) {
    auto& row = table.rows_[k - r - 1];
    row.assign(static_cast<std::size_t>(k - r), BigInt(0));
    charge(sizeof(std::vector<BigInt>));
    for (int i = 1; i <= k - r; ++i) {
      BigInt& entry = row[i - 1];
      if (i > ell) {
        entry = 0;
      } else if (i == k - r) {
        entry = 1;
      } else {
        sum = 0;
        const int x = k - i;
        const int j_top = std::min(x - r, ell);
        for (int j = 1; j <= j_top; ++j) {
          const BigInt& below = table.rows_[x - r - 1][j - 1];
          const BigInt& a = labels[x][j - 1];
          if (below == 0 || a == 0) continue;
          mpz_pow_ui(power.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(i));
          power *= below;
          sum += power;
        }
        entry = binomial(k - r, i) * sum;
      }
      charge(entry_bytes(entry));
    }
  }
  return table;
}

// ---------------------------------------------------------------------------

void for_each_minimally_susceptible(int r, int k, std::uint64_t cap,
                                    const std::function<void(std::span<const std::uint32_t>)>& visit) {
  require(r >= 2, ErrorCode::domain, "r must be at least 2");
  require(k > r, ErrorCode::domain, "k must exceed r");
  // edge masks index unordered pairs of [k] in a 64-bit word
  require(k <= 11, ErrorCode::cap_exceeded, "exhaustive enumeration supports k <= 11");
  const double leaves = std::pow(binomial_double(k - 1, r), k - r);
  if (leaves > static_cast<double>(cap)) {
    std::ostringstream msg;
    msg << "enumeration of " << leaves << " parent choices exceeds cap " << cap;
    fail(ErrorCode::cap_exceeded, msg.str());
  }

  std::vector<int> pair_index(static_cast<std::size_t>(k * k), -1);
  for (int u = 0, idx = 0; u < k; ++u)
    for (int v = u + 1; v < k; ++v) pair_index[u * k + v] = pair_index[v * k + u] = idx++;

  // every r-subset of [k] as a bit mask; a vertex may use those avoiding itself
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t m = 0; m < (1u << k); ++m)
    if (std::popcount(m) == r) subsets.push_back(m);

  std::vector<std::uint32_t> adj(static_cast<std::size_t>(k), 0);
  std::unordered_set<std::uint64_t> seen;
  std::uint64_t edges = 0;
  const std::uint32_t seed = (1u << r) - 1;
  const std::uint32_t all = (1u << k) - 1;

  auto percolates = [&]() {
    std::uint32_t infected = seed;
    for (;;) {
      std::uint32_t fresh = 0;
      for (int v = 0; v < k; ++v)
        if (!(infected >> v & 1u) && std::popcount(adj[v] & infected) >= r) fresh |= 1u << v;
      if (!fresh) break;
      infected |= fresh;
    }
    return infected == all;
  };

  auto recurse = [&](auto&& self, int v) -> void {
    if (v == k) {
      if (seen.count(edges) || !percolates()) return;
      seen.insert(edges);
      visit(std::span<const std::uint32_t>(adj));
      return;
    }
    for (std::uint32_t choice : subsets) {
      if (choice >> v & 1u) continue;
      if (adj[v] & choice) continue;  // edge already chosen from the other end
      for (int u = 0; u < k; ++u)
        if (choice >> u & 1u) {
          adj[u] |= 1u << v;
          edges |= 1ull << pair_index[u * k + v];
        }
      adj[v] |= choice;
      self(self, v + 1);
      adj[v] &= ~choice;
      for (int u = 0; u < k; ++u)
        if (choice >> u & 1u) {
          adj[u] &= ~(1u << v);
          edges &= ~(1ull << pair_index[u * k + v]);
        }
    }
  };
  recurse(recurse, r);
}

std::map<int, BigInt> brute_force_count(int r, int k, const BruteForceOptions& options) {
  std::map<int, BigInt> counts;
  const std::uint32_t seed = (1u << r) - 1;
  for_each_minimally_susceptible(r, k, options.cap, [&](std::span<const std::uint32_t> adj) {
    if (options.triangle_free) {
      for (int u = 0; u < k; ++u)
        for (int v = u + 1; v < k; ++v)
          if ((adj[u] >> v & 1u) && (adj[u] & adj[v])) return;
    }
    std::uint32_t infected = seed;
    int top = 0;
    for (;;) {
      std::uint32_t fresh = 0;
      for (int v = 0; v < k; ++v)
        if (!(infected >> v & 1u) && std::popcount(adj[v] & infected) >= r) fresh |= 1u << v;
      if (!fresh) break;
      top = std::popcount(fresh);
      infected |= fresh;
    }
    counts[top] += 1;
  });
  for (int i = 1; i <= k - r; ++i) counts.try_emplace(i, 0);
  return counts;
}

// ---------------------------------------------------------------------------

std::string kind_name(NormalizedKind kind) { return kind == NormalizedKind::sigma ? "sigma" : "rho_hat"; }

NormalizedCount normalized(const CountTable& table, int k, int i, NormalizedKind kind, std::optional<double> eps) {
  const int r = table.r();
  const BigInt& m = table.at(k, i);
  NormalizedCount out;
  out.r = r;
  out.k = k;
  out.i = i;
  out.kind = kind;
  out.eps = eps;
  const HighReal log_rf = log_fact_high(r - 1);
  const HighReal log_k = log(HighReal(k));
  if (kind == NormalizedKind::sigma) {
    require(table.variant() == Variant::exact, ErrorCode::invalid_argument, "sigma needs an exact table");
    out.log_value = log_high(m) - log_fact_high(k - r) + k * (log_rf - (r - 1) * log_k);
  } else {
    require(table.variant() != Variant::exact, ErrorCode::invalid_argument, "rho_hat needs a triangle-free table");
    require(eps.has_value() && *eps > 0, ErrorCode::invalid_argument, "rho_hat needs eps > 0");
    out.log_value =
        log_high(m) - log_fact_high(k - r) + k * (log_rf - log(HighReal(k - i)) - (r - 2) * log_k);
  }
  // absolute log error carries over as relative value error
  if (isfinite(out.log_value) &&
      abs(out.log_value) * std::numeric_limits<HighReal>::epsilon() * 64 > HighReal(1e-12))
    fail(ErrorCode::precision, "normalized count out of precision range");
  return out;
}

std::string to_json(const NormalizedCount& value) {
  nlohmann::ordered_json j;
  j["r"] = value.r;
  j["k"] = value.k;
  j["i"] = value.i;
  j["kind"] = kind_name(value.kind);
  if (value.eps) j["eps"] = *value.eps;
  if (isfinite(value.log_value))
    j["log_value"] = value.log();
  else
    j["log_value"] = nullptr;
  return j.dump();
}

HighReal a_entry(int r, int i, int j) {
  require(r >= 2 && i >= 1 && j >= 1, ErrorCode::domain, "A entry needs r >= 2 and i, j >= 1");
  return exp(i * log(HighReal(j)) - HighReal((r - 1) * i) - log_fact_high(i));
}

HighReal a_entry(int r, int i, int j, int k) {
  require(r >= 2 && i >= 1 && j >= 1, ErrorCode::domain, "A entry needs r >= 2 and i, j >= 1");
  require(i < k - r && j <= k - r - i, ErrorCode::domain, "A entry needs i < k - r and j <= k - r - i");
  const int x = k - i;
  const HighReal ratio = exp(log_fact_high(r - 1) - (r - 1) * log(HighReal(x))) * to_high(a_count(r, x, j)) / j;
  const HighReal log_v = i * log(HighReal(j)) - log_fact_high(i) +
                         (r - 1) * k * (log(HighReal(x)) - log(HighReal(k))) + i * log(ratio);
  return exp(log_v);
}

// ---------------------------------------------------------------------------

std::vector<BoundViolation> check_sigma_upper_bound(const CountTable& exact, double relative_slack) {
  std::vector<BoundViolation> out;
  const int r = exact.r();
  const HighReal slack = log1p(HighReal(relative_slack));
  for (int k = r + 1; k <= exact.k_max(); ++k) {
    for (int i = 1; i <= k - r; ++i) {
      const HighReal log_sigma = normalized(exact, k, i, NormalizedKind::sigma).log_value;
      const HighReal log_bound = -0.5 * log(HighReal(i)) - i - HighReal(r - 2) * k;
      if (log_sigma > log_bound + slack)
        out.push_back({r, k, i, static_cast<double>(log_sigma), static_cast<double>(log_bound)});
    }
  }
  return out;
}

std::vector<InductionRow> verify_induction_series(int i_max, double tail_tolerance) {
  require(i_max >= 1, ErrorCode::domain, "i_max must be at least 1");
  require(tail_tolerance > 0, ErrorCode::domain, "tail tolerance must be positive");
  std::vector<InductionRow> rows;
  rows.reserve(static_cast<std::size_t>(i_max));
  for (int i = 1; i <= i_max; ++i) {
    const long double s = i - 0.5L;
    auto log_term = [&](long double j) { return s * std::log(j) - j; };
    // terms peak near j = i - 1/2; sum relative to the peak value
    const long double peak = log_term(std::max(1.0L, s));
    long double sum = 0;
    long double tail = std::numeric_limits<long double>::infinity();
    int j = 1;
    for (;; ++j) {
      const long double t = std::exp(log_term(j) - peak);
      sum += t;
      if (j >= i) {
        const long double q = std::exp(s / j - 1.0L);
        if (q < 1) {
          tail = t * q / (1 - q) / sum;
          if (tail < tail_tolerance) break;
        }
      }
    }
    InductionRow row;
    row.i = i;
    row.terms = j;
    row.tail_bound = static_cast<double>(tail);
    const long double log_lhs = std::log(sum) + peak - i - std::lgamma(static_cast<long double>(i) + 1);
    row.log_lhs = static_cast<double>(log_lhs);
    row.log_rhs = -0.5 * std::log(static_cast<double>(i)) - i;
    row.holds = log_lhs + std::log1p(tail) <= static_cast<long double>(row.log_rhs);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bootperc::combinatorics
