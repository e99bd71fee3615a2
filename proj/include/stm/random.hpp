#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

#include "stm/error.hpp"

namespace stm {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer over (seed, stream). Every component derives its generator
/// from the user seed through this, with a fixed stream id per component.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace streams {
inline constexpr std::uint64_t kSynthParameters = 1;
inline constexpr std::uint64_t kSynthCorpus = 2;
inline constexpr std::uint64_t kClamp = 3;
inline constexpr std::uint64_t kSplit = 4;
inline constexpr std::uint64_t kChainBase = 100;
}  // namespace streams

/// Uniform in [0, 1) from the top 53 bits; independent of the standard library's
/// distribution implementations.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Draws an index with probability proportional to non-negative `weights`.
template <typename Derived>
Eigen::Index sample_weighted(const Eigen::DenseBase<Derived>& weights, typename Derived::Scalar total, Rng& rng) {
  using Scalar = typename Derived::Scalar;
  if (!(total > Scalar(0)) || !std::isfinite(static_cast<double>(total)))
    throw ConsistencyError("sampling weights have non-positive or non-finite total");
  const Scalar u = static_cast<Scalar>(uniform01(rng)) * total;
  Scalar acc = 0;
  const Eigen::Index n = weights.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += weights(i);
    if (u < acc) return i;
  }
  // u landed in rounding slack past the last increment: take the last positive weight.
  for (Eigen::Index i = n - 1; i >= 0; --i)
    if (weights(i) > Scalar(0)) return i;
  return n - 1;
}

/// exp-normalize of a log-weight vector; throws on any non-finite entry.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> normalize_log_weights(
    const Eigen::MatrixBase<Derived>& log_weights) {
  using Scalar = typename Derived::Scalar;
  if (!log_weights.allFinite()) throw ConsistencyError("non-finite log weight in conditional");
  const Scalar max = log_weights.maxCoeff();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p = (log_weights.array() - max).exp().matrix();
  p /= p.sum();
  return p;
}

}  // namespace stm
