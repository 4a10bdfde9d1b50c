/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "bootperc/thresholds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/constants/constants.hpp>

#include "json.hpp"

namespace bootperc::thresholds {

namespace {

// ~1660 bits; the series check compares numbers agreeing to ~400 digits
using SeriesReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<500>,
                                                 boost::multiprecision::et_off>;

void check_r(int r) { require(r >= 2, ErrorCode::domain, "r must be at least 2"); }

void check_positive(double v, const char* name) {
  require(std::isfinite(v) && v > 0, ErrorCode::domain, std::string(name) + " must be positive");
}

void check_gamma(double gamma) {
  require(gamma >= 0 && gamma < 1, ErrorCode::domain, "gamma must lie in [0, 1)");
}

double factorial(int m) { return std::tgamma(m + 1.0); }

HighReal mu_star_high(int r, const HighReal& alpha, const HighReal& beta) {
  const HighReal rf(factorial(r - 1));  // exact for small r
  return HighReal(r) + beta * log(alpha * pow(beta, r - 1) / rf) - alpha * pow(beta, r) / (rf * r) -
         beta * (r - 2);
}

}  // namespace

double critical_alpha(int r) {
  check_r(r);
  return factorial(r - 1) * std::pow((r - 1.0) / r, 2.0 * (r - 1));
}

double critical_alpha_H(int r, int ell) {
  check_r(r);
  require(ell >= 0 && ell <= r * (r - 1) / 2, ErrorCode::domain, "l must lie in [0, C(r,2)]");
  return factorial(r - 1) * std::pow((r - 1.0) * (r - 1.0) / (r * r - ell), r - 1.0);
}

double beta_r(int r, double alpha) {
  check_r(r);
  check_positive(alpha, "alpha");
  return std::pow(factorial(r - 1) / alpha, 1.0 / (r - 1));
}

double mu(int r, double alpha, double beta, double gamma) {
  check_r(r);
  check_positive(alpha, "alpha");
  check_positive(beta, "beta");
  check_gamma(gamma);
  return r + beta * std::log(alpha * std::pow(beta, r - 1) / factorial(r - 1)) -
         alpha * std::pow(beta, r) / factorial(r) * std::pow(1 - gamma, r) - beta * (r - 2 + gamma);
}

double mu_star(int r, double alpha, double beta) { return mu(r, alpha, beta, 0.0); }

double mu_eps(int r, double eps, double alpha, double beta, double gamma) {
  check_r(r);
  check_positive(eps, "eps");
  check_positive(alpha, "alpha");
  check_positive(beta, "beta");
  check_gamma(gamma);
  return r + beta * std::log(alpha * std::pow(beta, r - 1) * (1 - gamma) / factorial(r - 1)) -
         alpha * std::pow(beta, r) / factorial(r) * std::pow(1 - gamma, r) - beta * (r - 2 + eps * gamma);
}

double mu_bar(int r, double alpha, double beta, double gamma) {
  const double base = mu(r, alpha, beta, gamma);
  const double br = beta_r(r, alpha);
  require(beta <= br, ErrorCode::domain, "mu_bar needs beta <= beta_r(alpha)");
  require(gamma > 0, ErrorCode::domain, "mu_bar needs gamma > 0");
  const double xi = br - beta;
  if (xi == 0) return base;
  return base + xi * std::log(std::exp(1.0) * alpha * std::pow(beta, r) * gamma / (xi * factorial(r - 1)));
}

namespace {

HighReal beta_star_high(int r, const HighReal& a, double tol) {
  // mu_star is flat to third order at beta_r when alpha = alpha_r, so signs
  // are taken in extended precision
  auto f = [&](const HighReal& b) { return mu_star_high(r, a, b); };
  HighReal lo(1e-12), hi = pow(HighReal(factorial(r - 1)) / a, HighReal(1) / (r - 1));
  if (f(lo) <= 0) fail(ErrorCode::internal, "beta_star bracket failed at the lower end");
  int grow = 0;
  while (f(hi) > 0) {
    lo = hi;
    hi *= 2;
    if (++grow > 200) fail(ErrorCode::internal, "beta_star bracket failed at the upper end");
  }
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    HighReal mid = (lo + hi) / 2;
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace

double beta_star(int r, double alpha, double tol) {
  check_r(r);
  check_positive(alpha, "alpha");
  check_positive(tol, "tol");
  return static_cast<double>(beta_star_high(r, HighReal(alpha), tol));
}

double beta_star_critical(int r, double tol) {
  check_r(r);
  check_positive(tol, "tol");
  const HighReal q = HighReal(r - 1) / r;
  return static_cast<double>(beta_star_high(r, HighReal(factorial(r - 1)) * pow(q, 2 * (r - 1)), tol));
}

double k_r_of_eps(int r, double eps) {
  check_r(r);
  check_positive(eps, "eps");
  return std::pow(factorial(r - 1) / eps, 1.0 / (r - 1));
}

double theta(int r, double alpha, double n) {
  check_r(r);
  check_positive(alpha, "alpha");
  require(n > 1, ErrorCode::domain, "n must exceed 1");
  return std::pow(alpha / (n * std::pow(std::log(n), r - 1)), 1.0 / r);
}

double beta_r_eps(int r, double eps) {
  check_positive(eps, "eps");
  const double alpha = (1 + eps) * critical_alpha(r);
  return std::pow(1 + eps, 1.0 / (r - 1)) * beta_r(r, alpha);
}

double zeta_three_halves() {
  const long double s = 1.5L;
  const int n = 10;
  long double sum = 0;
  for (int k = 1; k < n; ++k) sum += std::pow(static_cast<long double>(k), -s);
  const long double big_n = n;
  sum += std::pow(big_n, 1 - s) / (s - 1) + std::pow(big_n, -s) / 2;
  // B_2k / (2k)!
  const long double bern[] = {1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66, -691.0L / 2730};
  long double rising = s;  // s (s+1) ... (s+2k-2)
  long double fact = 2;    // (2k)!
  for (int k = 1; k <= 6; ++k) {
    sum += bern[k - 1] / fact * rising * std::pow(big_n, -s - 2 * k + 1);
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    fact *= (2 * k + 1) * (2 * k + 2);
  }
  return static_cast<double>(sum);
}

ThresholdParams make_params(int r, double alpha, double n) {
  ThresholdParams out;
  out.r = r;
  out.alpha = alpha;
  out.n = n;
  out.p = theta(r, alpha, n);
  out.eps = n * std::pow(out.p, r);
  out.k_r = k_r_of_eps(r, out.eps);
  out.beta_r = beta_r(r, alpha);
  out.beta_star = beta_star(r, alpha);
  out.alpha_r = critical_alpha(r);
  for (int ell = 0; ell <= r * (r - 1) / 2; ++ell) out.alpha_H.push_back(critical_alpha_H(r, ell));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> out;
  if (points == 1) return {lo};
  for (int t = 0; t < points; ++t) out.push_back(lo + (hi - lo) * t / (points - 1));
  return out;
}

}  // namespace

std::vector<ClaimReport> verify_inequalities(std::span<const int> r_set, const GridSpec& grid) {
  ClaimReport small{"C_smallbeta", 0, {}};
  ClaimReport bar{"C_barmu", 0, {}};
  ClaimReport lam{"Cl_Lam", 0, {}};
  ClaimReport concave{"mu_eps_concavity", 0, {}};
  ClaimReport cl_beta{"Cl_beta", 0, {}};
  const auto gammas = linspace(0.01, 0.99, grid.gamma_points);
  const double h = gammas.size() > 1 ? gammas[1] - gammas[0] : 0.01;

  for (int r : r_set) {
    check_r(r);
    const double ar = critical_alpha(r);
    const auto eps_grid = linspace(0.01, 1.0 / (r + 1) - 0.01, grid.eps_points);
    for (double alpha : linspace(0.5 * ar, 1.5 * ar, grid.alpha_points)) {
      const double br = beta_r(r, alpha);
      const double top = mu_star(r, alpha, br);
      for (double beta : linspace(0.1, 2 * br, grid.beta_points)) {
        if (beta <= br) {
          const double ms = mu_star(r, alpha, beta);
          for (double gamma : gammas) {
            const double m = mu(r, alpha, beta, gamma);
            ++small.grid_size;
            if (m > ms + grid.tolerance)
              small.violations.push_back({{{"r", r}, {"alpha", alpha}, {"beta", beta}, {"gamma", gamma}}, m, ms});
            const double lower = std::min(m, mu_bar(r, alpha, beta, gamma));
            ++bar.grid_size;
            if (lower > top + grid.tolerance)
              bar.violations.push_back({{{"r", r}, {"alpha", alpha}, {"beta", beta}, {"gamma", gamma}}, lower, top});
          }
        }
        for (double eps : eps_grid) {
          for (std::size_t g = 1; g + 1 < gammas.size(); ++g) {
            const double second = mu_eps(r, eps, alpha, beta, gammas[g] - h) -
                                  2 * mu_eps(r, eps, alpha, beta, gammas[g]) +
                                  mu_eps(r, eps, alpha, beta, gammas[g] + h);
            ++concave.grid_size;
            if (!(second < 0))
              concave.violations.push_back(
                  {{{"r", r}, {"eps", eps}, {"alpha", alpha}, {"beta", beta}, {"gamma", gammas[g]}}, second, 0.0});
          }
        }
      }
    }
    for (double eps : eps_grid) {
      const double lhs = beta_r_eps(r, eps);
      const double rhs = beta_star(r, (1 + eps) * ar);
      ++cl_beta.grid_size;
      if (!(lhs < rhs)) cl_beta.violations.push_back({{{"r", r}, {"eps", eps}}, lhs, rhs});
    }
  }

  for (const auto& row : verify_lambda_series(grid.i_max)) {
    ++lam.grid_size;
    if (!row.holds || row.tail_bound >= 1e-15)
      lam.violations.push_back({{{"i", row.i}}, row.log10_abs_excess, row.log10_allowance});
  }
  return {small, bar, lam, concave, cl_beta};
}

std::string to_json(const std::vector<ClaimReport>& reports) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& rep : reports) {
    nlohmann::ordered_json j;
    j["claim_id"] = rep.claim_id;
    j["grid_size"] = rep.grid_size;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& v : rep.violations) arr.push_back({{"point", v.point}, {"lhs", v.lhs}, {"rhs", v.rhs}});
    j["violations"] = arr;
    out.push_back(j);
  }
  return out.dump(2);
}

std::vector<LambdaRow> verify_lambda_series(int i_max, double tail_tolerance) {
  require(i_max >= 1, ErrorCode::domain, "i_max must be at least 1");
  require(tail_tolerance > 0, ErrorCode::domain, "tail tolerance must be positive");
  const SeriesReal a(zeta_three_halves());
  const SeriesReal b = exp(SeriesReal(1)) / (2 * boost::math::constants::pi<SeriesReal>());
  std::vector<LambdaRow> rows;
  std::vector<SeriesReal> w;  // w[j-1] = j^(i-1/2) e^-j for the current i
  SeriesReal b_pow = 1;
  for (int i = 1; i <= i_max; ++i) {
    const SeriesReal s = SeriesReal(i) - SeriesReal(0.5);
    for (std::size_t j = 1; j <= w.size(); ++j) w[j - 1] *= static_cast<unsigned long>(j);
    b_pow *= b;
    const SeriesReal allowance = a * b_pow;
    const SeriesReal tol = std::min(SeriesReal(tail_tolerance), allowance * 1e-6);
    SeriesReal sum = 0;
    for (const auto& t : w) sum += t;
    SeriesReal tail;
    for (;;) {
      const auto size = static_cast<int>(w.size());
      if (size >= i && size > 0) {
        // t_{j+1}/t_j = (1+1/j)^s / e <= exp(s/j - 1), decreasing in j
        const SeriesReal q = exp(s / size - 1);
        if (q < 1) {
          tail = w.back() * q / (1 - q) / sum;
          if (tail < tol) break;
        }
      }
      const SeriesReal j(size + 1);
      w.push_back(exp(s * log(j) - j));
      sum += w.back();
    }
    const SeriesReal gamma = boost::multiprecision::tgamma(s + 1);
    LambdaRow row;
    row.i = i;
    row.terms = static_cast<int>(w.size());
    row.tail_bound = static_cast<double>(tail);
    const SeriesReal excess = abs(sum / gamma - 1);
    row.log10_abs_excess =
        excess == 0 ? -std::numeric_limits<double>::infinity() : static_cast<double>(log10(excess));
    row.log10_allowance = static_cast<double>(log10(allowance));
    row.holds = sum * (1 + tail) < gamma * (1 + allowance);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bootperc::thresholds
