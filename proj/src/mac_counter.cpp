// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hgc/mac_counter.hpp"

namespace hgc {

void MacCounter::add(const MacTag& tag, std::uint64_t macs) {
  entries_[tag] += macs;
  total_ += macs;
}

std::uint64_t MacCounter::at(const MacTag& tag) const {
  auto it = entries_.find(tag);
  return it == entries_.end() ? 0 : it->second;
}

}  // namespace hgc
