#ifndef DSSA_RNG_HPP_
#define DSSA_RNG_HPP_

#include <cstdint>
#include <random>

namespace dssa {

// Seeded random stream with portable draw semantics. All stochastic parts of
// the pipeline consume exactly one of these, in a documented order, so runs
// with the same seed are bit-reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1). 53-bit mantissa, engine-output order fixed.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection sampling keeps the draw unbiased and portable.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  bool coin() { return (engine_() & 1u) != 0; }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dssa

#endif  // DSSA_RNG_HPP_
