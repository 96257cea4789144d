#pragma once

#include <array>
#include <cstdint>

namespace evt {

/// Deterministic pseudo-random stream (xoshiro256++ seeded via splitmix64).
///
/// Implemented in-repo rather than through <random> engines so that streams
/// are byte-reproducible across platforms and standard-library versions, and
/// so that independent sub-streams can be derived from (seed, id) pairs for
/// order-independent parallel reductions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  /// Independent stream for worker/replication `stream_id` under `seed`.
  /// Seeds with a mix of both words so that (seed, id) and (seed', id')
  /// collide only with ordinary 64-bit-hash probability.
  static Rng substream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t x = seed;
    const std::uint64_t a = splitmix64(x);
    std::uint64_t y = stream_id ^ 0x9e3779b97f4a7c15ULL;
    const std::uint64_t b = splitmix64(y);
    return Rng(a ^ (b + 0x2545f4914f6cdd1dULL));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform draw strictly inside (0,1): 53 significant bits, offset by
  /// half an ulp so 0 and 1 are unreachable (safe through -log/quantile).
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace evt
