#include "rotcb/random.hpp"

#include <cmath>

namespace rotcb {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t state = splitmix64(seed);
  for (std::uint64_t id : path) {
    state = splitmix64(state ^ splitmix64(id + 0x632be59bd9b4e019ULL));
  }
  return state;
}

RandomSource::RandomSource(std::uint64_t seed) : engine_(seed) {}

double RandomSource::uniform() { return unit_(engine_); }

double RandomSource::uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }

double RandomSource::normal() { return normal_(engine_); }

std::complex<double> RandomSource::complex_normal(double variance) {
  const double scale = std::sqrt(0.5 * variance);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {scale * re, scale * im};
}

}  // namespace rotcb
