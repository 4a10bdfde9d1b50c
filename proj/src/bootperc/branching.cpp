/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "bootperc/branching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/poisson.hpp>

#include "bootperc/thresholds.hpp"
#include "json.hpp"

namespace bootperc::branching {

namespace {

void check_r(int r) { require(r >= 2 && r <= 64, ErrorCode::domain, "r must be in [2, 64]"); }

void check_eps(double eps) {
  require(std::isfinite(eps) && eps >= 0, ErrorCode::domain, "eps must be finite and >= 0");
}

constexpr std::uint64_t kBlock = 1u << 14;

}  // namespace

std::string reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::extinct: return "extinct";
    case StopReason::survival_rule: return "survival_rule";
    case StopReason::step_cap: return "step_cap";
  }
  return "unknown";
}

std::int64_t survival_cut(int r, double eps, const WalkPolicy& policy) {
  check_r(r);
  require(eps > 0, ErrorCode::domain, "survival cut needs eps > 0");
  require(policy.c1 > 0 && policy.margin >= 0 && policy.max_steps >= 1, ErrorCode::invalid_argument,
          "walk policy needs c1 > 0, margin >= 0, max_steps >= 1");
  const double cut = std::ceil(policy.c1 * thresholds::k_r_of_eps(r, eps));
  return cut > 1e15 ? std::numeric_limits<std::int64_t>::max() / 2 : static_cast<std::int64_t>(cut);
}

BPOutcome simulate_walk(int r, double eps, Engine& rng, const WalkPolicy& policy) {
  check_r(r);
  check_eps(eps);
  const std::int64_t cut = eps > 0 ? survival_cut(r, eps, policy) : std::numeric_limits<std::int64_t>::max();
  BPOutcome out;
  std::int64_t x = 0;
  for (std::int64_t t = r - 1;; ++t) {
    if (t - (r - 1) >= policy.max_steps) {
      out.reason = StopReason::step_cap;
      return out;
    }
    const double mean = binomial_double(t, r - 1) * eps;
    x += static_cast<std::int64_t>(poisson(rng, mean)) - 1;
    out.steps = t;
    out.max_alive = std::max(out.max_alive, x + 1);
    if (x < 0) {
      out.extinction_time = t;
      out.reason = StopReason::extinct;
      return out;
    }
    if (t >= cut && x >= policy.margin) {
      out.survived = true;
      out.reason = StopReason::survival_rule;
      return out;
    }
  }
}

BPOutcome simulate_walk(int r, double eps, std::uint64_t rng_seed, const WalkPolicy& policy) {
  Engine rng = make_stream(rng_seed, 0);
  return simulate_walk(r, eps, rng, policy);
}

double survival_asymptotic(int r, double eps) {
  check_r(r);
  require(eps > 0, ErrorCode::domain, "asymptotic survival needs eps > 0");
  return std::exp(-(r - 1.0) * (r - 1.0) / r * thresholds::k_r_of_eps(r, eps));
}

SurvivalEstimate survival_probability_mc(int r, double eps, std::uint64_t trials, std::uint64_t rng_seed,
                                         const WalkPolicy& policy, unsigned threads) {
  check_r(r);
  check_eps(eps);
  require(trials >= 1, ErrorCode::invalid_argument, "trials must be >= 1");
  const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
  std::vector<std::uint64_t> survivors(blocks, 0);
  parallel_for(blocks, threads == 0 ? default_thread_count() : threads, [&](std::size_t b) {
    const std::uint64_t end = std::min<std::uint64_t>(trials, (b + 1) * kBlock);
    std::uint64_t count = 0;
    for (std::uint64_t j = b * kBlock; j < end; ++j) {
      Engine rng = make_stream(rng_seed, j);
      count += simulate_walk(r, eps, rng, policy).survived ? 1 : 0;
    }
    survivors[b] = count;
  });
  SurvivalEstimate est;
  est.r = r;
  est.eps = eps;
  est.trials = trials;
  for (auto c : survivors) est.survivors += c;
  est.p_hat = static_cast<double>(est.survivors) / static_cast<double>(trials);
  est.stderr_ = std::sqrt(est.p_hat * (1 - est.p_hat) / static_cast<double>(trials));
  est.asymptotic = eps > 0 ? survival_asymptotic(r, eps) : 0.0;
  return est;
}

double survival_probability_policy(int r, double eps, const WalkPolicy& policy, double mass_tol) {
  check_r(r);
  check_eps(eps);
  if (eps == 0) return 0;
  const std::int64_t cut = survival_cut(r, eps, policy);
  const std::int64_t margin = policy.margin;
  require(cut < 10'000'000, ErrorCode::resource, "survival cut too large for the state space");
  const std::int64_t top = std::max<std::int64_t>(cut - (r - 1), 0) + margin;
  std::vector<double> cur(static_cast<std::size_t>(top + 1), 0.0), next(cur.size());
  cur[0] = 1.0;  // X_{r-2} = 0
  double survived = 0;
  for (std::int64_t t = r - 1; t - (r - 1) < policy.max_steps; ++t) {
    const std::int64_t thr = t >= cut ? margin : cut - t + margin;
    const boost::math::poisson_distribution<double> z_law(binomial_double(t, r - 1) * eps);
    std::fill(next.begin(), next.end(), 0.0);
    double remaining = 0;
    for (std::int64_t x = 0; x <= top; ++x) {
      const double w = cur[static_cast<std::size_t>(x)];
      if (w == 0) continue;
      const std::int64_t z_abs = std::max<std::int64_t>(thr - x + 1, 0);
      for (std::int64_t z = 0; z < z_abs; ++z) {
        const std::int64_t nx = x + z - 1;
        if (nx < 0) continue;
        const double m = w * boost::math::pdf(z_law, static_cast<double>(z));
        next[static_cast<std::size_t>(nx)] += m;
        remaining += m;
      }
      survived += w * (z_abs == 0 ? 1.0 : boost::math::cdf(boost::math::complement(z_law, static_cast<double>(z_abs - 1))));
    }
    cur.swap(next);
    if (remaining == 0 || (t >= cut && remaining <= mass_tol * survived)) break;
  }
  return survived;
}

std::string to_json(const SurvivalEstimate& e) {
  nlohmann::json j;
  j["r"] = e.r;
  j["eps"] = e.eps;
  j["trials"] = e.trials;
  j["survivors"] = e.survivors;
  j["p_hat"] = e.p_hat;
  j["stderr"] = e.stderr_;
  j["asymptotic"] = e.asymptotic;
  return j.dump();
}

double hitting_probability_exact(const combinatorics::CountTable& exact, double eps, int k, int i) {
  check_eps(eps);
  require(exact.variant() == combinatorics::Variant::exact, ErrorCode::invalid_argument,
          "hitting probabilities need the exact count table");
  const int r = exact.r();
  require(k > r && i >= 1 && i <= k - r, ErrorCode::domain, "need r < k and 1 <= i <= k - r");
  require(k <= exact.k_max(), ErrorCode::missing_entry, "count table does not reach k");
  const BigInt& m = exact.at(k, i);
  if (m == 0 || eps == 0) return 0;
  const HighReal lg = log(to_high(m)) - HighReal(eps) * binomial_double(k - i, r) +
                      (k - r) * log(HighReal(eps)) - HighReal(log_factorial(k - r));
  return static_cast<double>(exp(lg));
}

double hitting_probability_exact(int r, double eps, int k, int i) {
  check_r(r);
  require(k > r, ErrorCode::domain, "need r < k");
  return hitting_probability_exact(combinatorics::build_count_table(r, k), eps, k, i);
}

std::vector<Generation> simulate_generations(int r, double eps, Engine& rng, std::int64_t k_cap) {
  check_r(r);
  check_eps(eps);
  require(k_cap >= r, ErrorCode::invalid_argument, "k_cap must be >= r");
  std::vector<Generation> out{{r, r}};
  std::int64_t s = r, y = r;
  while (s < k_cap) {
    const double exposed = binomial_double(s, r) - binomial_double(s - y, r);
    y = static_cast<std::int64_t>(poisson(rng, eps * exposed));
    if (y == 0) break;
    s += y;
    out.push_back({s, y});
  }
  return out;
}

std::vector<Generation> simulate_generations(int r, double eps, std::uint64_t rng_seed, std::int64_t k_cap) {
  Engine rng = make_stream(rng_seed, 0);
  return simulate_generations(r, eps, rng, k_cap);
}

double HittingTally::frequency(int k, int i) const {
  auto it = hits.find({k, i});
  return it == hits.end() || trials == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(trials);
}

double HittingTally::stderr_of(int k, int i) const {
  const double f = frequency(k, i);
  return trials == 0 ? 0.0 : std::sqrt(f * (1 - f) / static_cast<double>(trials));
}

double HittingTally::reach_frequency(int k) const {
  if (trials == 0 || k < 0 || k >= static_cast<int>(reached.size())) return 0.0;
  return static_cast<double>(reached[static_cast<std::size_t>(k)]) / static_cast<double>(trials);
}

HittingTally hitting_frequency_mc(int r, double eps, int k_max, std::uint64_t trials, std::uint64_t rng_seed,
                                  unsigned threads) {
  check_r(r);
  check_eps(eps);
  require(k_max > r && k_max <= 4096, ErrorCode::domain, "k_max must be in (r, 4096]");
  require(trials >= 1, ErrorCode::invalid_argument, "trials must be >= 1");
  const std::size_t width = static_cast<std::size_t>(k_max) + 1;
  const std::uint64_t blocks = (trials + kBlock - 1) / kBlock;
  // per block: width*width hit cells then width reach cells
  std::vector<std::vector<std::uint64_t>> partial(blocks);
  parallel_for(blocks, threads == 0 ? default_thread_count() : threads, [&](std::size_t b) {
    std::vector<std::uint64_t> cells(width * width + width, 0);
    const std::uint64_t end = std::min<std::uint64_t>(trials, (b + 1) * kBlock);
    for (std::uint64_t j = b * kBlock; j < end; ++j) {
      Engine rng = make_stream(rng_seed, j);
      const auto gens = simulate_generations(r, eps, rng, k_max + 1);
      for (std::size_t t = 1; t < gens.size(); ++t)
        if (gens[t].s <= k_max) ++cells[static_cast<std::size_t>(gens[t].s) * width + static_cast<std::size_t>(gens[t].y)];
      const std::int64_t top = std::min<std::int64_t>(gens.back().s, k_max);
      for (std::int64_t k = 0; k <= top; ++k) ++cells[width * width + static_cast<std::size_t>(k)];
    }
    partial[b] = std::move(cells);
  });
  HittingTally tally;
  tally.r = r;
  tally.eps = eps;
  tally.k_max = k_max;
  tally.trials = trials;
  tally.reached.assign(width, 0);
  std::vector<std::uint64_t> sum(width * width, 0);
  for (const auto& cells : partial) {
    for (std::size_t c = 0; c < width * width; ++c) sum[c] += cells[c];
    for (std::size_t k = 0; k < width; ++k) tally.reached[k] += cells[width * width + k];
  }
  for (std::size_t k = 0; k < width; ++k)
    for (std::size_t i = 0; i < width; ++i)
      if (sum[k * width + i] != 0) tally.hits[{static_cast<int>(k), static_cast<int>(i)}] = sum[k * width + i];
  return tally;
}

}  // namespace bootperc::branching
