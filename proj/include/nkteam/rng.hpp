#ifndef NKTEAM_RNG_HPP
#define NKTEAM_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace nkteam {

// Stateless 64-bit finalizer (the splitmix64 output function). Good avalanche,
// used for seed derivation and stable hashing of scenario keys.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// Order-sensitive combiner for deriving stream seeds from structured keys
// (master seed, factor levels, round index, ...). mix(a).mix(b) != mix(b).mix(a).
class SeedMixer {
 public:
  constexpr explicit SeedMixer(std::uint64_t init = 0) noexcept : state_(mix64(init)) {}

  constexpr SeedMixer& mix(std::uint64_t v) noexcept {
    state_ = mix64(state_ + 0x9E3779B97F4A7C15ULL + v);
    return *this;
  }

  constexpr std::uint64_t value() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

namespace detail {
constexpr std::uint64_t rotl64(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}
}  // namespace detail

// xoshiro256** (Blackman & Vigna). Self-contained so streams are bit-identical
// across platforms and standard libraries; std distributions are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept {
    // Expand the seed through splitmix64 as the authors recommend.
    std::uint64_t sm = seed;
    for (auto& word : state_) {
      sm += 0x9E3779B97F4A7C15ULL;
      word = mix64(sm);
    }
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = detail::rotl64(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Masked rejection: unbiased, deterministic.
  std::uint32_t below(std::uint32_t n) noexcept {
    if (n <= 1) return 0;
    std::uint32_t mask = n - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    for (;;) {
      const std::uint32_t v = static_cast<std::uint32_t>(next_u64()) & mask;
      if (v < n) return v;
    }
  }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  // Normal(0, sigma^2) via Box-Muller. Always consumes exactly two uniforms,
  // so stream positions do not depend on sigma; sigma == 0 yields exactly 0.
  double normal(double sigma) noexcept {
    const double u1 = 1.0 - uniform01();  // (0,1], keeps log finite
    const double u2 = uniform01();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

 private:
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace nkteam

#endif  // NKTEAM_RNG_HPP
