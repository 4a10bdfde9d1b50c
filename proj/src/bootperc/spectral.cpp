/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "bootperc/spectral.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "json.hpp"

namespace bootperc::spectral {

namespace {

void check_shape(int r, int ell, int ell_budget) {
  require(r >= 2 && r <= 64, ErrorCode::domain, "r must be in [2, 64]");
  require(ell >= 1, ErrorCode::domain, "ell must be >= 1");
  require(ell <= ell_budget, ErrorCode::cap_exceeded, "ell exceeds the companion dimension budget");
}

// BFS over the positivity pattern of m (or its transpose); returns levels,
// -1 for unreachable.
std::vector<int> bfs_levels(const Matrix& m, bool transpose) {
  const Eigen::Index n = m.rows();
  std::vector<int> level(static_cast<std::size_t>(n), -1);
  std::queue<Eigen::Index> queue;
  level[0] = 0;
  queue.push(0);
  while (!queue.empty()) {
    const Eigen::Index u = queue.front();
    queue.pop();
    for (Eigen::Index w = 0; w < n; ++w) {
      const double entry = transpose ? m(w, u) : m(u, w);
      if (entry > 0 && level[static_cast<std::size_t>(w)] < 0) {
        level[static_cast<std::size_t>(w)] = level[static_cast<std::size_t>(u)] + 1;
        queue.push(w);
      }
    }
  }
  return level;
}

}  // namespace

Matrix build_A(int r, int ell, int ell_budget) {
  check_shape(r, ell, ell_budget);
  Matrix a(ell, ell);
  for (int i = 1; i <= ell; ++i) {
    const double row = -(r - 1.0) * i - std::lgamma(i + 1.0);
    require(row > -700, ErrorCode::precision, "A entries underflow double precision");
    for (int j = 1; j <= ell; ++j) a(i - 1, j - 1) = std::exp(i * std::log(static_cast<double>(j)) + row);
  }
  return a;
}

Matrix companion_psi(const Matrix& m, int ell_budget) {
  require(m.rows() == m.cols() && m.rows() >= 1, ErrorCode::invalid_argument, "companion needs a square matrix");
  const Eigen::Index ell = m.rows();
  require(ell <= ell_budget, ErrorCode::cap_exceeded, "ell exceeds the companion dimension budget");
  const Eigen::Index dim = ell * ell;
  Matrix psi = Matrix::Zero(dim, dim);
  // block (0, j) carries row j of m in its row j
  for (Eigen::Index j = 0; j < ell; ++j) psi.block(j, j * ell, 1, ell) = m.row(j);
  for (Eigen::Index b = 1; b < ell; ++b) psi.block(b * ell, (b - 1) * ell, ell, ell).setIdentity();
  return psi;
}

bool is_primitive(const Matrix& m) {
  require(m.rows() == m.cols() && m.rows() >= 1, ErrorCode::invalid_argument, "primitivity needs a square matrix");
  const auto fwd = bfs_levels(m, false);
  const auto bwd = bfs_levels(m, true);
  for (std::size_t u = 0; u < fwd.size(); ++u)
    if (fwd[u] < 0 || bwd[u] < 0) return false;
  // period of an irreducible pattern: gcd of level[u] + 1 - level[w] over arcs
  int g = 0;
  const Eigen::Index n = m.rows();
  for (Eigen::Index u = 0; u < n && g != 1; ++u)
    for (Eigen::Index w = 0; w < n; ++w)
      if (m(u, w) > 0) g = std::gcd(g, std::abs(fwd[static_cast<std::size_t>(u)] + 1 - fwd[static_cast<std::size_t>(w)]));
  return g == 1;
}

PerronResult perron(const Matrix& m, double tol, int max_iterations) {
  require(m.rows() == m.cols() && m.rows() >= 1, ErrorCode::invalid_argument, "perron needs a square matrix");
  require(tol > 0 && max_iterations >= 1, ErrorCode::invalid_argument, "perron needs tol > 0, max_iterations >= 1");
  require(m.allFinite() && (m.array() >= 0).all(), ErrorCode::invalid_argument,
          "perron needs a finite nonnegative matrix");
  const Eigen::Index n = m.rows();
  PerronResult out;
  if (m(0, 0) > 0 && m == m(0, 0) * Matrix::Identity(n, n)) {
    // c I is reducible for n > 1 but every vector is a Perron vector
    out.lambda = out.lower = out.upper = m(0, 0);
    out.v = Vector::Constant(n, 1.0 / static_cast<double>(n));
    return out;
  }
  require(is_primitive(m), ErrorCode::invalid_argument, "perron needs a primitive matrix");
  Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector y(n);
  for (int it = 1; it <= max_iterations; ++it) {
    y.noalias() = m * x;
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double q = y[i] / x[i];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    const double sum = y.sum();
    require(sum > 0 && std::isfinite(sum), ErrorCode::not_converged, "power iteration lost the iterate");
    x = y / sum;
    // an entry may underflow to 0 in x even though rho > 0; treat as fatal
    require((x.array() > 0).all(), ErrorCode::precision, "Perron vector underflowed");
    if (hi - lo <= tol * hi) {
      out.lambda = 0.5 * (lo + hi);
      out.v = x;
      out.iterations = it;
      out.lower = lo;
      out.upper = hi;
      return out;
    }
  }
  fail(ErrorCode::not_converged, "power iteration did not converge within the iteration cap");
}

Matrix d_lambda_times(const Matrix& a, double lambda) {
  require(lambda > 0, ErrorCode::domain, "lambda must be positive");
  Matrix out = a;
  for (Eigen::Index i = 0; i < a.rows(); ++i) out.row(i) *= std::pow(lambda, -static_cast<double>(i + 1));
  return out;
}

LambdaResult lambda_via_psi(int r, int ell, double tol) {
  const Matrix a = build_A(r, ell);
  const PerronResult p = perron(companion_psi(a), tol);
  LambdaResult out;
  out.r = r;
  out.ell = ell;
  out.method = "psi";
  out.lambda = p.lambda;
  out.iterations = p.iterations;
  out.residual = p.upper - p.lower;
  out.v = p.v;
  return out;
}

LambdaResult lambda_via_dlambda(int r, int ell, double tol) {
  require(tol > 0, ErrorCode::invalid_argument, "tol must be positive");
  const Matrix a = build_A(r, ell);
  auto rho = [&](double lambda) { return perron(d_lambda_times(a, lambda), 1e-14).lambda; };
  // rho(D_lambda A) decreases in lambda
  double hi = 1.0;
  for (int g = 0; rho(hi) >= 1.0; ++g) {
    require(g < 200, ErrorCode::not_converged, "no upper bracket for lambda");
    hi *= 2;
  }
  double lo = hi / 2;
  for (int g = 0; rho(lo) <= 1.0; ++g) {
    require(g < 200, ErrorCode::not_converged, "no lower bracket for lambda");
    hi = lo;
    lo /= 2;
  }
  int steps = 0;
  while (hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi && steps < 200) {
    const double mid = 0.5 * (lo + hi);
    (rho(mid) > 1.0 ? lo : hi) = mid;
    ++steps;
  }
  LambdaResult out;
  out.r = r;
  out.ell = ell;
  out.method = "dlambda";
  out.lambda = 0.5 * (lo + hi);
  out.iterations = steps;
  const PerronResult p = perron(d_lambda_times(a, out.lambda), 1e-14);
  out.residual = std::abs(p.lambda - 1.0);
  out.v = p.v;
  require(out.residual < tol, ErrorCode::not_converged, "bisection did not reach |rho(D_lambda A) - 1| < tol");
  return out;
}

Vector lift_eigenvector(const Vector& v, double lambda) {
  const Eigen::Index ell = v.size();
  Vector w(ell * ell);
  for (Eigen::Index b = 0; b < ell; ++b) w.segment(b * ell, ell) = std::pow(lambda, static_cast<double>(ell - 1 - b)) * v;
  return w;
}

double lift_residual(const Matrix& a, double lambda, const Vector& v) {
  require(a.rows() == v.size(), ErrorCode::invalid_argument, "vector length must match A");
  const Vector w = lift_eigenvector(v, lambda);
  const Vector diff = companion_psi(a, static_cast<int>(a.rows())) * w - lambda * w;
  return diff.lpNorm<Eigen::Infinity>() / w.lpNorm<Eigen::Infinity>();
}

std::vector<double> dlambda_row_sums(const Matrix& a, double lambda) {
  const Matrix d = d_lambda_times(a, lambda);
  std::vector<double> sums(static_cast<std::size_t>(d.rows()));
  for (Eigen::Index i = 0; i < d.rows(); ++i) sums[static_cast<std::size_t>(i)] = d.row(i).sum();
  return sums;
}

std::string to_json(const LambdaResult& result) {
  nlohmann::json j;
  j["r"] = result.r;
  j["ell"] = result.ell;
  j["method"] = result.method;
  j["lambda"] = result.lambda;
  j["iterations"] = result.iterations;
  j["residual"] = result.residual;
  return j.dump();
}

}  // namespace bootperc::spectral
