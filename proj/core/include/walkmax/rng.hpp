#pragma once

#include <cstdint>

#include "walkmax/params.hpp"

namespace walkmax {

// SplitMix64 finalizer: a bijective 64-bit mixer used both as a standalone
// seed-expansion generator and as the counter-based per-trial key
// derivation. Passes standard statistical batteries as a stream generator.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256++ (Blackman & Vigna): 256-bit state, 64-bit output, period
// 2^256-1. Large enough state and quality for 1e10-step trials.
class Xoshiro256pp {
 public:
  // Counter-based construction: the state is expanded by SplitMix64 from
  // base_seed advanced by the trial index along a Weyl sequence, so trial
  // streams depend only on (base_seed, trial_index) and never on how trials
  // are partitioned across workers.
  Xoshiro256pp(std::uint64_t base_seed, std::uint64_t trial_index) {
    std::uint64_t sm = base_seed + trial_index * 0x9E3779B97F4A7C15ULL;
    for (auto& word : s_) word = splitmix64_next(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero is fixed
  }

  std::uint64_t next() {
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

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Identity string recorded in output metadata.
inline const char* rng_id() { return "xoshiro256++/splitmix64-counter"; }

// Threshold T such that a uniform 64-bit draw u satisfies u < T with
// probability round(p * 2^64)/2^64; exact floor(num*2^64/den) rounding for
// rational p (bias < 2^-64 per draw either way).
std::uint64_t bernoulli_threshold(const WalkParams& w);

}  // namespace walkmax
