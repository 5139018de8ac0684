#pragma once

#include <cstdint>

namespace bmlrp {

// Deterministic 64-bit generator built on the SplitMix64 mixing function.
// The algorithm is fixed on purpose: committed experiment outputs and test
// fixtures must reproduce bit-for-bit across platforms and releases.
// Independent purposes (node placement, identifier draws, long-range links,
// pair sampling, ...) use substreams derived from the master seed, so adding
// a consumer never perturbs the draws of another.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  // Unbiased integer in [0, bound), bound > 0. Rejection sampling keeps the
  // draw sequence identical everywhere.
  uint64_t next_below(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t x = next();
      if (x >= threshold) return x % bound;
    }
  }

  // Uniform double in [0, 1), 53 significant bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Child generator for an independent purpose. Streams with distinct tags
  // never share draws.
  Rng substream(uint64_t tag) const { return Rng(mix(state_ ^ mix(tag + kGamma))); }

 private:
  static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  uint64_t state_;
};

// Substream tags. Append only; renumbering breaks committed fixtures.
namespace rng_tag {
constexpr uint64_t kPlacement = 1;
constexpr uint64_t kNodeIds = 2;
constexpr uint64_t kLongRange = 3;
constexpr uint64_t kStretchPairs = 4;
constexpr uint64_t kSeedSweep = 5;
constexpr uint64_t kInstance = 6;
constexpr uint64_t kFault = 7;
}  // namespace rng_tag

}  // namespace bmlrp
