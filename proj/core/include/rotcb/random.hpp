#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace rotcb {

using Engine = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent sub-stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Hashes a root seed together with a path of stream identifiers
/// (trial, user, purpose, ...) into a seed for an independent sub-stream.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept;

class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance = 1.0);

  Engine& engine() noexcept { return engine_; }

 private:
  Engine engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace rotcb
