// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hgc/roles.hpp"

namespace hgc {

std::string_view to_string(BlockRole role) {
  switch (role) {
    case BlockRole::kCtrlEncoder:
      return "ctrl_encoder";
    case BlockRole::kCtrlMid:
      return "ctrl_mid";
    case BlockRole::kGenEncoder:
      return "gen_encoder";
    case BlockRole::kGenMid:
      return "gen_mid";
    case BlockRole::kGenDecoder:
      return "gen_decoder";
  }
  return "unknown";
}

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::kPrompt:
      return "prompt";
    case Branch::kNull:
      return "null";
    case Branch::kFused:
      return "fused";
  }
  return "unknown";
}

std::optional<BlockRole> parse_role(std::string_view name) {
  for (BlockRole role : kAllRoles) {
    if (to_string(role) == name) return role;
  }
  return std::nullopt;
}

std::optional<Branch> parse_branch(std::string_view name) {
  for (Branch b : {Branch::kPrompt, Branch::kNull, Branch::kFused}) {
    if (to_string(b) == name) return b;
  }
  return std::nullopt;
}

}  // namespace hgc
