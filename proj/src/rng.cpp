// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hgc/rng.hpp"

#include <cmath>
#include <string>

#include "hgc/error.hpp"

namespace hgc {

std::uint64_t Rng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::next_uniform(double lo, double hi) {
  if (!(lo < hi)) {
    throw InvalidRangeError("rng: empty interval [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + ")");
  }
  constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
  const double u = static_cast<double>(next_u64() >> 11) * kInv53;
  const double v = lo + (hi - lo) * u;
  // Rounding in lo + (hi-lo)*u can land on hi for u close to 1.
  return v < hi ? v : std::nextafter(hi, lo);
}

}  // namespace hgc
