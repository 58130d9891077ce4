// Copyright (c) 2026, rlvrkit contributors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic RNG helpers, string hashing, dense matrix storage and
// the error types shared across the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rlvr {

/// Raised when a configuration document is structurally invalid.
/// The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when training hits a non-finite quantity. Exit code 3 in the CLI.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Hashing and seed derivation.
//
// Reproducibility across platforms requires fixed algorithms, so string
// hashing is FNV-1a and seed mixing is splitmix64 rather than std::hash.
// ---------------------------------------------------------------------------

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a(std::string_view text,
                              std::uint64_t h = kFnvOffset) noexcept {
  for (unsigned char c : text) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds any number of 64-bit values into one seed. Order-sensitive.
template <typename... Rest>
constexpr std::uint64_t mix_seed(std::uint64_t first, Rest... rest) noexcept {
  std::uint64_t h = splitmix64(first);
  ((h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(rest)))), ...);
  return h;
}

// ---------------------------------------------------------------------------
// RNG. The engine is std::mt19937_64 (its output sequence is fixed by the
// standard); the real-valued mappings are written out by hand because the
// stdlib distributions are implementation-defined.
// ---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Draws an index from an unnormalized non-negative weight vector.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0))
      throw std::invalid_argument("Rng::categorical: weights sum to zero");
    double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.size() - 1;  // guard against fp round-off at u ~ total
  }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Dense row-major matrix of doubles. Deliberately minimal: the policy needs
// storage, indexing and a handful of whole-matrix reductions, nothing more.
// ---------------------------------------------------------------------------

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& at_flat(std::size_t i) { return data_[i]; }
  double at_flat(std::size_t i) const { return data_[i]; }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace rlvr
