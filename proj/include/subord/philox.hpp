#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace subord {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw, SC'11).
// A stream is addressed by (seed, stream id); the draw position is a 64-bit
// counter, so distinct streams never overlap and a stream can be replayed
// from any offset. This is what makes per-sample streams deterministic
// independently of worker scheduling.
class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

  std::uint32_t next_u32() {
    if (have_ == 0) refill();
    return block_[--have_];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Open interval (0,1); never returns an endpoint, safe under log().
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  double normal() {
    if (have_normal_) {
      have_normal_ = false;
      return spare_normal_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * m;
    have_normal_ = true;
    return u * m;
  }

  // Marsaglia-Tsang; shape < 1 handled by the boost Gamma(a) = Gamma(a+1) U^{1/a}.
  double gamma(double shape, double rate = 1.0) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
  }

  // Raw 4x32 block for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      ctr = round_once(ctr, key);
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return ctr;
  }

 private:
  static std::array<std::uint32_t, 4> round_once(const std::array<std::uint32_t, 4>& x,
                                                 const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * x[2];
    return {static_cast<std::uint32_t>(p1 >> 32) ^ x[1] ^ k[0],
            static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>(p0 >> 32) ^ x[3] ^ k[1],
            static_cast<std::uint32_t>(p0)};
  }

  void refill() {
    block_ = block(ctr_, key_);
    have_ = 4;
    if (++ctr_[0] == 0) ++ctr_[1];
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> block_{};
  int have_ = 0;
  double spare_normal_ = 0.0;
  bool have_normal_ = false;
};

}  // namespace subord
