#pragma once

// Philox4x64-10 counter-based generator (Salmon et al., Random123).
//
// A stream is identified by its key; stream_for(seed, index) gives every
// trial of a scan its own independent, reproducible sequence regardless of
// which worker thread runs it.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <utility>

#include "pointdet/spinor_geom.hpp"

namespace pointdet {

class Philox4x64 {
 public:
  using result_type = std::uint64_t;
  using counter_type = std::array<std::uint64_t, 4>;
  using key_type = std::array<std::uint64_t, 2>;

  Philox4x64() = default;
  explicit Philox4x64(key_type key, counter_type counter = {}) : key_(key), counter_(counter) {}

  /// The keyed bijection on 256-bit counters.
  static counter_type block(counter_type ctr, key_type key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const auto [hi0, lo0] = mulhilo(kMul0, ctr[0]);
      const auto [hi1, lo1] = mulhilo(kMul1, ctr[2]);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (used_ == 4) {
      buffer_ = block(counter_, key_);
      increment();
      used_ = 0;
    }
    return buffer_[used_++];
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform point in the ball of radius r (rejection from the cube).
  Point3 in_ball(double r) {
    for (;;) {
      const Point3 p{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
      if (dot(p, p) < 1.0) return r * p;
    }
  }

  /// Standard normal by Box-Muller.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Uniformly distributed rotation (normalized Gaussian quaternion).
  Rotation rotation() { return Rotation::from_quaternion(normal(), normal(), normal(), normal()); }

  /// Uniformly distributed unit vector.
  Point3 direction() {
    for (;;) {
      const Point3 p{normal(), normal(), normal()};
      const double r = norm(p);
      if (r > 1e-12) return p / r;
    }
  }

  const key_type& key() const { return key_; }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  static std::pair<std::uint64_t, std::uint64_t> mulhilo(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    return {static_cast<std::uint64_t>(p >> 64), static_cast<std::uint64_t>(p)};
  }

  void increment() {
    for (auto& c : counter_)
      if (++c != 0) break;
  }

  key_type key_{};
  counter_type counter_{};
  counter_type buffer_{};
  int used_ = 4;
};

/// Random Mobius map U diag(e^s, e^-s) V with U, V in SU(2) and |s| <= log_stretch,
/// so its condition number is at most e^(2 log_stretch).
inline MobiusMap<double> random_mobius(Philox4x64& rng, double log_stretch = 1.0) {
  using C = std::complex<double>;
  auto su2 = [&] {
    const Rotation q = rng.rotation();
    return std::array<C, 4>{C(q.w, q.z), C(-q.y, q.x), C(q.y, q.x), C(q.w, -q.z)};
  };
  const auto U = su2(), V = su2();
  const double s = rng.uniform(-log_stretch, log_stretch);
  const std::array<C, 4> M{U[0] * std::exp(s), U[1] * std::exp(-s), U[2] * std::exp(s), U[3] * std::exp(-s)};
  return MobiusMap<double>(M[0] * V[0] + M[1] * V[2], M[0] * V[1] + M[1] * V[3], M[2] * V[0] + M[3] * V[2],
                           M[2] * V[1] + M[3] * V[3]);
}

/// Independent stream for (master seed, stream index).
inline Philox4x64 stream_for(std::uint64_t seed, std::uint64_t index) {
  return Philox4x64({seed, index});
}

}  // namespace pointdet
