#pragma once

#include <array>
#include <cstdint>

// Counter-based RNG in the Philox 4x64-10 family. A draw is a pure function of
// (seed, stream, counter), so any edge weight can be recomputed on demand and
// sampling order never matters. That is what makes results byte-identical
// across worker counts.

namespace wedge {

namespace rng_detail {

inline std::uint64_t mulhi64(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) >> 64);
}

}  // namespace rng_detail

struct CounterBlock {
  std::array<std::uint64_t, 4> w{};
};

class Philox4x64 {
 public:
  Philox4x64(std::uint64_t seed, std::uint64_t stream)
      : key0_(seed), key1_(stream) {}

  // Ten rounds over the counter (c0, c1, 0, 0) with the key schedule bumped by
  // Weyl constants each round.
  CounterBlock block(std::uint64_t c0, std::uint64_t c1) const {
    std::uint64_t x0 = c0, x1 = c1, x2 = 0, x3 = 0;
    std::uint64_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t hi0 = rng_detail::mulhi64(kMul0, x0);
      const std::uint64_t lo0 = kMul0 * x0;
      const std::uint64_t hi1 = rng_detail::mulhi64(kMul1, x2);
      const std::uint64_t lo1 = kMul1 * x2;
      const std::uint64_t y0 = hi1 ^ x1 ^ k0;
      const std::uint64_t y2 = hi0 ^ x3 ^ k1;
      x0 = y0;
      x1 = lo1;
      x2 = y2;
      x3 = lo0;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return CounterBlock{{x0, x1, x2, x3}};
  }

  std::uint64_t word(std::uint64_t c0, std::uint64_t c1, int slot) const {
    return block(c0, c1).w[static_cast<std::size_t>(slot) & 3];
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

  std::uint64_t key0_;
  std::uint64_t key1_;
};

// Top 53 bits to a double in [0, 1).
inline double u01(std::uint64_t w) {
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

// SplitMix64 finalizer; used to spread structured ids into stream ids.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ (b + 0x9E3779B97F4A7C15ull));
}

inline std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b,
                                   std::uint64_t c) {
  return mix64(derive_stream(a, b) ^ (c + 0x94D049BB133111EBull));
}

}  // namespace wedge
