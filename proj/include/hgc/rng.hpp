// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace hgc {

// SplitMix64. The stream for a given seed is identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // lo + (hi - lo) * u with u = (raw >> 11) * 2^-53, so the result lies in
  // [lo, hi). Throws InvalidRangeError unless lo < hi.
  double next_uniform(double lo, double hi);

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace hgc
