/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numeric>

#include "bootperc/common.hpp"

using namespace bootperc;

TEST(Binomial, PascalTriangle) {
  // rows built by addition only
  std::vector<BigInt> row{1};
  for (int n = 1; n <= 60; ++n) {
    std::vector<BigInt> next(n + 1, 1);
    for (int k = 1; k < n; ++k) next[k] = row[k - 1] + row[k];
    row = next;
    for (int k = 0; k <= n; ++k) ASSERT_EQ(binomial(n, k), row[k]) << n << " " << k;
  }
  EXPECT_EQ(binomial(5, 7), 0);
  EXPECT_EQ(binomial(5, -1), 0);
  EXPECT_DOUBLE_EQ(binomial_double(45, 2), 990.0);
  EXPECT_DOUBLE_EQ(binomial_double(10, 11), 0.0);
}

TEST(Binomial, DecimalAndHighReal) {
  BigInt big = binomial(200, 100);
  EXPECT_EQ(to_decimal(big), "90548514656103281165404177077484163874504589675413336841320");
  EXPECT_NEAR(static_cast<double>(log(to_high(big))), std::log(9.0548514656103281e58), 1e-12);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Engine a = make_stream(7, 3), b = make_stream(7, 3), c = make_stream(7, 4), d = make_stream(8, 3);
  auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}

TEST(Rng, UniformBelowStaysInRange) {
  Engine rng = make_stream(1, 0);
  std::vector<int> hits(7, 0);
  for (int t = 0; t < 70000; ++t) {
    auto v = uniform_below(rng, 7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
  for (int t = 0; t < 1000; ++t) {
    double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

class PoissonMoments : public ::testing::TestWithParam<double> {};

TEST_P(PoissonMoments, MeanAndVarianceMatch) {
  const double mean = GetParam();
  Engine rng = make_stream(42, static_cast<std::uint64_t>(mean * 1000));
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int t = 0; t < n; ++t) {
    double v = static_cast<double>(poisson(rng, mean));
    s += v;
    s2 += v * v;
  }
  const double m = s / n, var = s2 / n - m * m;
  // 5 standard errors of each estimate
  EXPECT_NEAR(m, mean, 5 * std::sqrt(mean / n) + 1e-12);
  EXPECT_NEAR(var, mean, 5 * std::sqrt((2 * mean * mean + mean) / n) + 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Means, PoissonMoments, ::testing::Values(0.0, 0.05, 1.0, 3.5, 9.99, 10.0, 25.0, 400.0));

TEST(Rng, PoissonSmallMeanPmf) {
  Engine rng = make_stream(5, 5);
  const int n = 400000;
  std::vector<int> hits(4, 0);
  for (int t = 0; t < n; ++t) {
    auto v = poisson(rng, 1.0);
    if (v < 4) ++hits[v];
  }
  const double pmf[4] = {std::exp(-1.0), std::exp(-1.0), std::exp(-1.0) / 2, std::exp(-1.0) / 6};
  for (int v = 0; v < 4; ++v) EXPECT_NEAR(hits[v] / double(n), pmf[v], 5 * std::sqrt(pmf[v] / n));
}

TEST(Parallel, EveryIndexOnce) {
  std::vector<std::atomic<int>> seen(1000);
  parallel_for(seen.size(), 4, [&](std::size_t i) { seen[i]++; });
  for (auto& s : seen) EXPECT_EQ(s.load(), 1);
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 6) fail(ErrorCode::internal, "boom");
                            }),
               Error);
}
