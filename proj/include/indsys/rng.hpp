#ifndef INDSYS_RNG_HPP
#define INDSYS_RNG_HPP

#include <cstdint>
#include <vector>

namespace indsys {

// Deterministic 64-bit generator (splitmix64). We avoid <random> distributions
// so that identical seeds give identical streams across compilers and standard
// libraries; run reproducibility is part of the output contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Rejection-free modulo bias is negligible for the
  // range sizes used here (all << 2^32), but we debias anyway.
  std::uint64_t bounded(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t threshold = (0ULL - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(bounded(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  bool chance(double p) { return next_double() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(bounded(v.size()))];
  }

  // Derives an independent stream from (seed, a, b). Used to give every
  // candidate evaluation its own generator so population evaluation can run
  // in parallel and still match the serial reference bit for bit.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    Rng mixer(seed ^ (a * 0xd1342543de82ef95ULL) ^ (b * 0xaf251af3b0f025b5ULL));
    mixer.next_u64();
    return mixer.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace indsys

#endif  // INDSYS_RNG_HPP
