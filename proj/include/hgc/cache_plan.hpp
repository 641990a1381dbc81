// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hgc/roles.hpp"

namespace hgc {

enum class DecisionKind : std::uint8_t { kCompute, kReuse, kSkip };

struct Decision {
  DecisionKind kind = DecisionKind::kCompute;
  int source = 0;  // source step for kReuse, 0 otherwise

  static Decision compute() { return {DecisionKind::kCompute, 0}; }
  static Decision reuse(int source_step) { return {DecisionKind::kReuse, source_step}; }
  static Decision skip() { return {DecisionKind::kSkip, 0}; }

  bool operator==(const Decision&) const = default;
};

// Per-step, per-role decision table over steps 1..horizon. A fresh plan is
// all-Compute.
class CachePlan {
 public:
  CachePlan() = default;
  explicit CachePlan(int horizon);

  int horizon() const { return horizon_; }
  const Decision& at(int step, BlockRole role) const;
  void set(int step, BlockRole role, Decision d);

  bool operator==(const CachePlan&) const = default;

 private:
  std::size_t slot(int step, BlockRole role) const;

  int horizon_ = 0;
  std::vector<Decision> decisions_;
};

// Throws PlanIntegrityError unless:
//  - every Reuse(s) has 1 <= s < step and the role is Compute at s;
//  - Skip appears only on control roles, and both control roles agree;
//  - step 1 is Compute for every role that is not Skip there.
void validate_plan(const CachePlan& plan);

// Control roles from `control`, generative roles from `generative`.
CachePlan merge_plans(const CachePlan& control, const CachePlan& generative);

// "C", "R(6)", "S".
std::string symbol(const Decision& d);

// CSV text with header `step,role,decision,source`, one record per
// (step, role) in canonical order; source is empty unless the decision is
// reuse.
std::string serialize_plan(const CachePlan& plan);
CachePlan parse_plan(const std::string& text);

// Step-by-role grid of symbols for terminal display.
std::string format_plan_grid(const CachePlan& plan);

// FNV-1a 64 of the serialized plan, as "fnv1a64:<16 hex digits>".
std::string plan_digest(const CachePlan& plan);

}  // namespace hgc
