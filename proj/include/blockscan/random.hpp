#pragma once

#include <cstdint>

namespace blockscan {

// SplitMix64 (Steele, Lea & Flood 2014). Fixed here, rather than taken from
// <random>, so stored signatures are reproducible across platforms and
// implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform in [0, 1) from the top 53 bits.
  double next_double();

 private:
  std::uint64_t state_;
};

}  // namespace blockscan
