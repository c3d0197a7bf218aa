#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace psips {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace detail {

constexpr double kZigguratR = 3.6541528853610088;
constexpr double kZigguratV = 4.92867323399e-3;

// 256-layer ziggurat tables for the standard normal. x_i is decreasing,
// f[i] = exp(-x_i^2/2) increasing with f[256] = 1.
struct ZigguratTables {
  std::uint64_t k[256];
  double w[256];
  double f[257];
  ZigguratTables() {
    constexpr double m = 4503599627370496.0;  // 2^52
    double x[257];
    x[0] = kZigguratV / std::exp(-0.5 * kZigguratR * kZigguratR);
    x[1] = kZigguratR;
    x[256] = 0.0;
    for (int i = 2; i < 256; ++i)
      x[i] = std::sqrt(-2.0 * std::log(kZigguratV / x[i - 1] +
                                       std::exp(-0.5 * x[i - 1] * x[i - 1])));
    for (int i = 0; i < 256; ++i) {
      k[i] = static_cast<std::uint64_t>(x[i + 1] / x[i] * m);
      w[i] = x[i] / m;
      f[i] = std::exp(-0.5 * x[i] * x[i]);
    }
    f[256] = 1.0;
  }
};

inline const ZigguratTables zig_tables{};

}  // namespace detail

/// Deterministic xoshiro256++ stream with a ziggurat Gaussian sampler.
/// Self-contained so that identical seeds give identical runs on any
/// platform, independent of the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& si : s_) si = (x = splitmix64(x));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via the 256-layer ziggurat (exact rejection sampling).
  double normal() {
    const detail::ZigguratTables& z = detail::zig_tables;
    for (;;) {
      const std::uint64_t bits = next_u64();
      const int idx = static_cast<int>(bits & 0xff);
      const bool neg = (bits >> 8) & 1;
      const std::uint64_t rabs = (bits >> 12) & 0x000fffffffffffffULL;  // 52 bits
      const double x = static_cast<double>(rabs) * z.w[idx];
      if (rabs < z.k[idx]) return neg ? -x : x;  // fully inside the layer
      if (idx == 0) {
        // tail beyond r by exponential rejection
        double xx, yy;
        do {
          xx = -std::log1p(-uniform()) / detail::kZigguratR;
          yy = -std::log1p(-uniform());
        } while (yy + yy <= xx * xx);
        return neg ? -(detail::kZigguratR + xx) : detail::kZigguratR + xx;
      }
      // wedge: layer idx spans y in [f[idx], f[idx + 1]]
      if ((z.f[idx + 1] - z.f[idx]) * uniform() + z.f[idx] < std::exp(-0.5 * x * x))
        return neg ? -x : x;
    }
  }

  /// Index in [0, n) from cumulative scan over probabilities p (sum ~ 1).
  template <class Vec>
  int categorical(const Vec& p) {
    const double u = uniform();
    double acc = 0.0;
    const int n = static_cast<int>(p.size());
    for (int i = 0; i < n; ++i) {
      acc += p[i];
      if (u < acc) return i;
    }
    return n - 1;
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace psips
