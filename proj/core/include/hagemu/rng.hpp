#pragma once

#include <cstdint>
#include <random>

namespace hagemu {

// Deterministic random stream. One master seed spawns independent
// per-episode child streams (Rng::child), so evaluation episodes can run
// in parallel and still reproduce bit-for-bit regardless of scheduling.
//
// Variates are generated from raw mt19937_64 output instead of the
// standard <random> distributions, whose results may differ across
// standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  static Rng child(std::uint64_t master_seed, std::uint64_t stream) {
    return Rng(mix(master_seed) ^ mix(stream * 0x9e3779b97f4a7c15ull + 1));
  }

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n); n must be positive.
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

 private:
  // splitmix64 finalizer; decorrelates nearby seeds.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace hagemu
