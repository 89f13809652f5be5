#ifndef WINDCAST_RNG_HPP
#define WINDCAST_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace windcast {

/**
 * Seeded random source with fully specified output mappings.
 *
 * std::mt19937_64 has a standard-mandated bit stream, but the standard
 * distributions do not; mapping bits to doubles here keeps every draw
 * reproducible across toolchains, which the training and reporting
 * pipelines rely on for byte-identical reruns.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; caches the spare deviate.
  double normal();

  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  /// Fisher-Yates shuffle driven by below().
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace windcast

#endif  // WINDCAST_RNG_HPP
