#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mblborn {

/// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic random stream. std::mt19937_64 has a bit-exact output
/// sequence mandated by the standard; the uniform and Gaussian mappings are
/// done by hand here because the std::*_distribution algorithms are
/// implementation-defined and would break bitwise run reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Box-Muller; consumes two uniforms per pair, caches the spare.
  double gaussian(double mean, double stddev) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + stddev * spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return mean + stddev * r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Statistically independent stream for one (quench, candidate) cell; a pure
/// function of its arguments, so candidate evaluations can run in any order
/// or thread count and still reproduce bitwise.
inline Rng per_candidate_rng(std::uint64_t seed, std::uint64_t quench,
                             std::uint64_t candidate) {
  std::uint64_t s = mix64(seed);
  s = mix64(s ^ (quench + 0x517cc1b727220a95ULL));
  s = mix64(s ^ (candidate + 0x2545f4914f6cdd1dULL));
  return Rng(s);
}

/// Independent stream keyed by a single index (disorder realizations, trial
/// sweeps).
inline Rng derived_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(mix64(mix64(seed) ^ (index + 0xd1b54a32d192ed03ULL)));
}

}  // namespace mblborn
