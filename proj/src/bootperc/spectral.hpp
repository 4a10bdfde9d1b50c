/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bootperc/common.hpp"

namespace bootperc::spectral {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

constexpr int kDefaultEllBudget = 64;

/// A(r, l)_{ij} = j^i e^{-(r-1) i} / i!, 1 <= i, j <= l.
Matrix build_A(int r, int ell, int ell_budget = kDefaultEllBudget);

/// Block companion of an l x l matrix M: top block row (M_1, ..., M_l) where
/// M_j keeps only row j of M, identity blocks on the block subdiagonal.
Matrix companion_psi(const Matrix& m, int ell_budget = kDefaultEllBudget);

/// Irreducible and aperiodic, decided on the positivity pattern.
bool is_primitive(const Matrix& m);

struct PerronResult {
  double lambda = 0;
  Vector v;             ///< positive, unit sum
  int iterations = 0;
  double lower = 0;     ///< Collatz-Wielandt bracket at exit
  double upper = 0;
};

/// Power iteration, stopped when the Collatz-Wielandt bounds
/// min (Mx)_i/x_i <= rho <= max (Mx)_i/x_i agree to tol relative.
PerronResult perron(const Matrix& m, double tol = 1e-12, int max_iterations = 2'000'000);

struct LambdaResult {
  int r = 2;
  int ell = 1;
  std::string method;
  double lambda = 0;
  int iterations = 0;     ///< power steps (psi) or bisection steps (dlambda)
  double residual = 0;    ///< |rho(D_lambda A) - 1| (dlambda) or bracket width (psi)
  Vector v;               ///< Perron vector of psi(A) or of D_lambda A
};

/// Perron eigenvalue of psi(A(r, l)).
LambdaResult lambda_via_psi(int r, int ell, double tol = 1e-12);
/// Root of rho(D_lambda A) = 1 by bisection, D_lambda = diag(lambda^-i).
LambdaResult lambda_via_dlambda(int r, int ell, double tol = 1e-10);

Matrix d_lambda_times(const Matrix& a, double lambda);

/// Stacked (lambda^{l-1} v, ..., lambda v, v).
Vector lift_eigenvector(const Vector& v, double lambda);
/// ||psi(A) w - lambda w||_inf / ||w||_inf for the lifted w.
double lift_residual(const Matrix& a, double lambda, const Vector& v);

/// Row sums of D_lambda A.
std::vector<double> dlambda_row_sums(const Matrix& a, double lambda);

std::string to_json(const LambdaResult& result);

}  // namespace bootperc::spectral
