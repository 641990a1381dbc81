// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>

#include "hgc/pipeline.hpp"

namespace hgc {

struct FineCacheConfig {
  bool enabled_control = true;
  bool enabled_generative = true;
  // Unset means floor(T_G / 2).
  std::optional<int> gate_step;

  static FineCacheConfig disabled() { return {false, false, std::nullopt}; }

  int effective_gate(int t_generative) const {
    return gate_step ? *gate_step : t_generative / 2;
  }
  void validate(int t_generative, const std::string& prefix = "fine") const;
  bool operator==(const FineCacheConfig&) const = default;
};

// Elementwise (f_p + f_np) / 2.
Tensor gate_fuse(const Tensor& f_p, const Tensor& f_np);

// Dual up to and including the gate step, Single afterwards. Always Dual when
// the generative fine cache is off.
BranchMode branch_mode(int step, const FineCacheConfig& cfg, int t_generative);

enum class AttnOrigin { kComputed, kControlStepOne, kFused };

struct AttnRead {
  Tensor value;
  AttnOrigin origin = AttnOrigin::kComputed;
};

// Cross-attention cache for one run.
//
// Control sites: the map computed at step 1 is stored and returned at every
// later computed step without invoking the computation.
//
// Generative sites: before the gate both branches compute. Each dual
// computation at or before the gate records the branch map; at the gate the
// pair is fused. After the gate every query returns the fused map. A site that
// was not computed at the gate step (block-level reuse) is fused from its most
// recent pre-gate pair on first post-gate use.
class AttnCache {
 public:
  AttnCache(FineCacheConfig config, int t_generative);

  AttnRead control(BlockRole site, int step, const AttnCompute& compute);
  AttnRead generative(BlockRole site, int step, Branch branch, const AttnCompute& compute);

  const Tensor* control_map(BlockRole site) const;
  const Tensor* fused(BlockRole site) const;
  int gate() const { return gate_; }

 private:
  struct PendingMap {
    int step = 0;
    Tensor value;
  };
  struct GenerativeSite {
    std::optional<PendingMap> prompt;
    std::optional<PendingMap> null;
    std::optional<Tensor> fused;
  };

  bool try_fuse(GenerativeSite& site);

  FineCacheConfig config_;
  int gate_ = 0;
  std::array<std::optional<Tensor>, kNumRoles> control_maps_;
  std::array<GenerativeSite, kNumRoles> generative_sites_;
};

}  // namespace hgc
