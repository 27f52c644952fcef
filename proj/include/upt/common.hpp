#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace upt {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// 0/1 vectors: truth indicators theta and decisions delta.
using Indicator = Eigen::VectorXi;

using Rng = std::mt19937_64;

// Independent sub-streams of one replicate.
enum class Stream : std::uint64_t { signal = 1, design = 2, noise = 3, method = 4 };

// SplitMix64 finalizer; mixes (master seed, replicate, stream) into a seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate, Stream stream) {
  return mix_seed(mix_seed(mix_seed(master) ^ replicate) ^ static_cast<std::uint64_t>(stream));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t replicate, Stream stream) {
  return Rng(derive_seed(master, replicate, stream));
}

}  // namespace upt
