// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <map>

#include "hgc/roles.hpp"

namespace hgc {

struct MacTag {
  int step = 0;
  BlockRole role = BlockRole::kGenEncoder;
  Branch branch = Branch::kPrompt;

  auto operator<=>(const MacTag&) const = default;
};

// Multiply-accumulate counter. Only matrix products are charged; every charge
// is filed under a tag so the total always equals the sum of the sub-counts.
class MacCounter {
 public:
  void add(const MacTag& tag, std::uint64_t macs);

  std::uint64_t total() const { return total_; }
  std::uint64_t at(const MacTag& tag) const;

  // Ordered by (step, role, branch).
  const std::map<MacTag, std::uint64_t>& entries() const { return entries_; }

 private:
  std::uint64_t total_ = 0;
  std::map<MacTag, std::uint64_t> entries_;
};

}  // namespace hgc
