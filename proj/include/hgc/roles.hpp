// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace hgc {

// Declaration order is the canonical ordering used by plans, ledgers and
// CSV output.
enum class BlockRole : std::uint8_t {
  kCtrlEncoder = 0,
  kCtrlMid,
  kGenEncoder,
  kGenMid,
  kGenDecoder,
};

inline constexpr std::size_t kNumRoles = 5;

inline constexpr std::array<BlockRole, kNumRoles> kAllRoles = {
    BlockRole::kCtrlEncoder, BlockRole::kCtrlMid, BlockRole::kGenEncoder,
    BlockRole::kGenMid, BlockRole::kGenDecoder};

inline constexpr std::array<BlockRole, 2> kControlRoles = {BlockRole::kCtrlEncoder,
                                                           BlockRole::kCtrlMid};

inline constexpr std::array<BlockRole, 3> kGenerativeRoles = {
    BlockRole::kGenEncoder, BlockRole::kGenMid, BlockRole::kGenDecoder};

constexpr bool is_control(BlockRole role) {
  return role == BlockRole::kCtrlEncoder || role == BlockRole::kCtrlMid;
}

constexpr std::size_t index_of(BlockRole role) { return static_cast<std::size_t>(role); }

// Classifier-free guidance branch. kFused is the single pass that runs after
// the gate step, when prompt and null-prompt attention have been merged.
enum class Branch : std::uint8_t {
  kPrompt = 0,
  kNull,
  kFused,
};

std::string_view to_string(BlockRole role);
std::string_view to_string(Branch branch);
std::optional<BlockRole> parse_role(std::string_view name);
std::optional<Branch> parse_branch(std::string_view name);

}  // namespace hgc
