/*
 * (C) Copyright 2026 The bootperc Authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

namespace bootperc {

using BigInt = mpz_class;

/// 50 significant decimal digits; enough headroom for the 1e-12 relative
/// contract on normalized counts and for the cubic root in beta_star.
using HighReal = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<50>, boost::multiprecision::et_off>;

enum class ErrorCode {
  domain = 1,
  invalid_argument = 2,
  resource = 3,
  cap_exceeded = 4,
  not_converged = 5,
  missing_entry = 6,
  precision = 7,
  io = 8,
  internal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

std::string to_decimal(const BigInt& value);
BigInt binomial(std::int64_t n, std::int64_t k);
double binomial_double(std::int64_t n, std::int64_t k);
double log_factorial(std::int64_t n);
HighReal to_high(const BigInt& value);

// ---------------------------------------------------------------------------
// Random numbers
//
// Every Monte Carlo trial owns a generator derived from (seed, trial index),
// so outcomes do not depend on how trials are scheduled across threads.
// Only the engine (mt19937_64) comes from the standard library; the variates
// below are implemented here so that streams are bit-identical across
// standard library implementations.

using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t& state);
Engine make_stream(std::uint64_t seed, std::uint64_t index);

/// Uniform on [0, 1) with 53 random bits.
double uniform01(Engine& rng);

/// Uniform integer in [0, bound).
std::uint64_t uniform_below(Engine& rng, std::uint64_t bound);

/// Poisson variate: sequential inversion below mean 10, Hormann's PTRS
/// transformed rejection above.
std::uint64_t poisson(Engine& rng, double mean);

// ---------------------------------------------------------------------------
// Parallelism

unsigned default_thread_count();

/// Runs body(index) for index in [0, count) on up to `threads` workers.
/// Each index is visited exactly once; the caller stores results by index.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t idx = 0; idx < count; ++idx) body(idx);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t idx = w; idx < count; idx += workers) body(idx);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace bootperc
