#pragma once

#include <cmath>
#include <cstdint>

namespace clgd {

// Name reported in config echoes so runs can state how their randomness was
// produced.
inline constexpr const char* kRngAlgorithm = "splitmix64+box-muller";

// splitmix64 (Steele, Lea, Flood 2014). Fully specified by the constants
// below, so streams reproduce on any platform with 64-bit integers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe as the log argument in Box-Muller.
  double next_double_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via the Box-Muller transform. Pairs are generated
  // together; the second draw is served from the spare slot.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_double_open();
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Derives an independent substream seed from (seed, a, b) by chaining the
// splitmix64 finalizer. Used wherever work is keyed by indices (point,
// repetition, iteration) so the draw order never depends on scheduling.
inline std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t a,
                                std::uint64_t b) {
  SplitMix64 g0(seed);
  SplitMix64 g1(g0.next_u64() ^ a);
  SplitMix64 g2(g1.next_u64() ^ b);
  return g2.next_u64();
}

}  // namespace clgd
