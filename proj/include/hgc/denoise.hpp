// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "hgc/cache_plan.hpp"
#include "hgc/fine_cache.hpp"
#include "hgc/mac_counter.hpp"
#include "hgc/pipeline.hpp"

namespace hgc {

// Instrumentation callbacks for run_denoise. All default to no-ops.
class RunObserver {
 public:
  virtual ~RunObserver() = default;

  // A block was executed (`source_step == step`) or its output substituted
  // from `source_step`/`source_branch`.
  virtual void on_block(int /*step*/, BlockRole /*role*/, Branch /*branch*/,
                        const Tensor& /*out*/, int /*source_step*/, Branch /*source_branch*/) {}
  virtual void on_attention(int /*step*/, BlockRole /*role*/, Branch /*branch*/,
                            const Tensor& /*attn*/, AttnOrigin /*origin*/) {}
  // Control output injected at `step`; not called on Skip steps.
  virtual void on_control(int /*step*/, const ControlOutput& /*ctrl*/) {}
};

struct DenoiseResult {
  std::vector<LatentState> trajectory;  // latent after each step 1..T
  MacCounter counter;
};

// Executes T steps following `plan` (all five roles). Compute roles run and
// store their outputs, Reuse roles substitute the stored output of their
// source step bit-for-bit, and a Skip on the control roles injects nothing.
//
// In Single branch mode a generative Reuse whose source step ran in Dual mode
// substitutes the prompt-branch output.
DenoiseResult run_denoise(const Pipeline& pipeline, const CachePlan& plan,
                          const FineCacheConfig& fine, RunObserver* observer = nullptr);

DenoiseResult run_denoise(const Pipeline& pipeline, const CachePlan& control_plan,
                          const CachePlan& generative_plan, const FineCacheConfig& fine,
                          RunObserver* observer = nullptr);

CachePlan all_compute_plan(int horizon);

}  // namespace hgc
