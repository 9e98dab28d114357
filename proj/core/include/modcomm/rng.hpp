#pragma once

#include <cstdint>

namespace modcomm {

// SplitMix64 evaluated in counter mode: draw i is mix(seed + (i + 1) * golden).
// Any draw can be recomputed from (seed, i) alone.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t at(std::uint64_t counter) const noexcept;
  std::uint64_t next() noexcept { return at(counter_++); }
  // uniform in [0, 1) with 53 random bits
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace modcomm
