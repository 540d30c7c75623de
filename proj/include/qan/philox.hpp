#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace qan::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Chosen so a
// (seed, pulse index) pair addresses an independent random stream: pulses can
// be simulated in any order or in parallel with bit-identical results.
struct Philox4x32 {
  static std::array<uint32_t, 4> block(const std::array<uint32_t, 4>& counter,
                                       const std::array<uint32_t, 2>& key) {
    std::array<uint32_t, 4> x = counter;
    std::array<uint32_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
      const uint64_t p0 = uint64_t{0xD2511F53u} * x[0];
      const uint64_t p1 = uint64_t{0xCD9E8D57u} * x[2];
      x = {static_cast<uint32_t>(p1 >> 32) ^ x[1] ^ k[0], static_cast<uint32_t>(p1),
           static_cast<uint32_t>(p0 >> 32) ^ x[3] ^ k[1], static_cast<uint32_t>(p0)};
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    return x;
  }
};

// Buffered stream view over the Philox blocks of one (seed, stream) pair.
// Draws are consumed in a fixed documented order, so two parties holding the
// same seed reproduce identical values.
class PhiloxStream {
 public:
  PhiloxStream(uint64_t seed, uint64_t stream)
      : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
        prefix_{static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)} {}

  uint32_t next_u32() {
    if (index_ == 4) refill();
    return buffer_[index_++];
  }

  uint64_t next_u64() {
    const uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  // Unbiased integer in [0, n) by rejection.
  uint64_t below(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t draw;
    do {
      draw = next_u64();
    } while (draw >= limit);
    return draw % n;
  }

  // Poisson by sequential inversion; suitable for the small means used here.
  uint32_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double u = next_double();
    double p = std::exp(-mean);
    double cdf = p;
    uint32_t k = 0;
    while (u > cdf && k < 200) {
      ++k;
      p *= mean / k;
      cdf += p;
    }
    return k;
  }

 private:
  void refill() {
    buffer_ = Philox4x32::block({static_cast<uint32_t>(block_), static_cast<uint32_t>(block_ >> 32),
                                 prefix_[0], prefix_[1]},
                                key_);
    ++block_;
    index_ = 0;
  }

  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 2> prefix_;
  uint64_t block_ = 0;
  std::array<uint32_t, 4> buffer_{};
  int index_ = 4;
};

}  // namespace qan::rng
