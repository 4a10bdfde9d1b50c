/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "bootperc/common.hpp"

namespace bootperc::thresholds {

// Natural logarithms throughout. Growth scales beta are in units of log n,
// gamma is the top-level fraction i/k.

/// alpha_r = (r-1)! ((r-1)/r)^(2(r-1))
double critical_alpha(int r);
/// alpha_{r,l} = (r-1)! ((r-1)^2/(r^2-l))^(r-1), 0 <= l <= C(r,2)
double critical_alpha_H(int r, int ell);

/// beta_r(alpha) = ((r-1)!/alpha)^(1/(r-1))
double beta_r(int r, double alpha);

double mu(int r, double alpha, double beta, double gamma);
double mu_star(int r, double alpha, double beta);
double mu_eps(int r, double eps, double alpha, double beta, double gamma);
/// mu + xi log(e alpha beta^r gamma / (xi (r-1)!)), xi = beta_r(alpha) - beta;
/// needs 0 < beta <= beta_r(alpha) and 0 < gamma < 1.
double mu_bar(int r, double alpha, double beta, double gamma);

/// Unique zero of mu_star(r, alpha, .), by bisection in extended precision.
double beta_star(int r, double alpha, double tol = 1e-10);
/// beta_star at alpha = alpha_r with alpha_r itself in extended precision;
/// the root is triple there, so rounding alpha_r to double moves it by ~1e-5.
double beta_star_critical(int r, double tol = 1e-10);

/// k_r(eps) = ((r-1)!/eps)^(1/(r-1))
double k_r_of_eps(int r, double eps);
/// theta_r(alpha, n) = (alpha / (n log^(r-1) n))^(1/r)
double theta(int r, double alpha, double n);
/// (1+eps)^(1/(r-1)) beta_r(alpha_{r,eps}) with alpha_{r,eps} = (1+eps) alpha_r
double beta_r_eps(int r, double eps);

/// zeta(3/2) by partial sum plus Euler-Maclaurin tail.
double zeta_three_halves();

struct ThresholdParams {
  int r = 2;
  double alpha = 0;
  double n = 0;
  double p = 0;        ///< theta_r(alpha, n)
  double eps = 0;      ///< n p^r
  double k_r = 0;      ///< k_r(eps)
  double beta_r = 0;   ///< beta_r(alpha)
  double beta_star = 0;
  double alpha_r = 0;
  std::vector<double> alpha_H;  ///< alpha_{r,l} for l = 0..C(r,2)
};
ThresholdParams make_params(int r, double alpha, double n);

// ---------------------------------------------------------------------------
// Inequality verifier

struct GridSpec {
  int alpha_points = 21;  ///< over [0.5, 1.5] alpha_r
  int beta_points = 50;   ///< over [0.1, 2 beta_r(alpha)]
  int gamma_points = 50;  ///< over [0.01, 0.99]
  int eps_points = 20;    ///< over [0.01, 1/(r+1) - 0.01]
  int i_max = 500;
  double tolerance = 1e-12;  ///< absolute slack on exponent comparisons
};

struct Violation {
  std::map<std::string, double> point;
  double lhs = 0;
  double rhs = 0;
};

struct ClaimReport {
  std::string claim_id;
  std::size_t grid_size = 0;
  std::vector<Violation> violations;
};

/// Claims: C_smallbeta (mu <= mu_star for beta <= beta_r), C_barmu
/// (min(mu, mu_bar) <= mu_star at beta_r), Cl_Lam (series vs gamma function),
/// mu_eps_concavity (second difference in gamma), Cl_beta (beta_r_eps < beta_star).
std::vector<ClaimReport> verify_inequalities(std::span<const int> r_set, const GridSpec& grid = {});

/// JSON array of {claim_id, grid_size, violations:[{point, lhs, rhs}]}.
std::string to_json(const std::vector<ClaimReport>& reports);

struct LambdaRow {
  int i = 0;
  int terms = 0;              ///< series truncation point
  double tail_bound = 0;      ///< relative bound on the discarded tail
  double log10_abs_excess = 0; ///< log10|Lambda/Gamma(i+1/2) - 1|
  double log10_allowance = 0; ///< log10(a b^i)
  bool holds = false;
};

/// sum_j j^(i-1/2) e^-j < Gamma(i+1/2) (1 + zeta(3/2) (e/2pi)^i) for i = 1..i_max.
std::vector<LambdaRow> verify_lambda_series(int i_max, double tail_tolerance = 1e-15);

}  // namespace bootperc::thresholds
