// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hgc/denoise.hpp"

#include <map>
#include <tuple>

#include "hgc/error.hpp"

namespace hgc {
namespace {

class NullObserver : public RunObserver {};

// Stores computed block outputs and serves plan-directed substitutions.
class PlannedHooks : public BlockHooks {
 public:
  PlannedHooks(const CachePlan& plan, AttnCache& attn, RunObserver& observer)
      : plan_(plan), attn_(attn), observer_(observer) {}

  std::optional<Tensor> substitute(int step, BlockRole role, Branch branch) override {
    const Decision& d = plan_.at(step, role);
    if (d.kind != DecisionKind::kReuse) return std::nullopt;
    auto it = outputs_.find({role, d.source, branch});
    Branch source_branch = branch;
    if (it == outputs_.end() && branch == Branch::kFused) {
      source_branch = Branch::kPrompt;
      it = outputs_.find({role, d.source, source_branch});
    }
    if (it == outputs_.end()) {
      throw PlanIntegrityError("run: step " + std::to_string(step) + " role " +
                               std::string(to_string(role)) + " reuses step " +
                               std::to_string(d.source) + ", which has no stored output");
    }
    observer_.on_block(step, role, branch, it->second, d.source, source_branch);
    return it->second;
  }

  void computed(int step, BlockRole role, Branch branch, const Tensor& out) override {
    outputs_[{role, step, branch}] = out;
    observer_.on_block(step, role, branch, out, step, branch);
  }

  Tensor attention(int step, BlockRole role, Branch branch, const AttnCompute& compute) override {
    AttnRead r = is_control(role) ? attn_.control(role, step, compute)
                                  : attn_.generative(role, step, branch, compute);
    observer_.on_attention(step, role, branch, r.value, r.origin);
    return std::move(r.value);
  }

 private:
  const CachePlan& plan_;
  AttnCache& attn_;
  RunObserver& observer_;
  std::map<std::tuple<BlockRole, int, Branch>, Tensor> outputs_;
};

}  // namespace

CachePlan all_compute_plan(int horizon) { return CachePlan(horizon); }

DenoiseResult run_denoise(const Pipeline& pl, const CachePlan& plan, const FineCacheConfig& fine,
                          RunObserver* observer) {
  const int steps = pl.config.t_generative;
  if (plan.horizon() != steps) {
    throw PlanIntegrityError("run: plan horizon " + std::to_string(plan.horizon()) +
                             " does not match T = " + std::to_string(steps));
  }
  validate_plan(plan);
  fine.validate(steps);

  NullObserver null_observer;
  RunObserver& obs = observer ? *observer : null_observer;
  AttnCache attn(fine, steps);
  PlannedHooks hooks(plan, attn, obs);

  DenoiseResult result;
  result.trajectory.reserve(static_cast<std::size_t>(steps));
  LatentState state{pl.initial_latent, 0};
  for (int step = 1; step <= steps; ++step) {
    std::optional<ControlOutput> ctrl;
    if (plan.at(step, BlockRole::kCtrlEncoder).kind != DecisionKind::kSkip) {
      ctrl = control_step(pl, add(state.x, pl.condition), pl.prompt.p, step, result.counter,
                          &hooks);
      const Decision& enc = plan.at(step, BlockRole::kCtrlEncoder);
      const Decision& mid = plan.at(step, BlockRole::kCtrlMid);
      if (enc.kind == DecisionKind::kReuse && enc == mid) ctrl->source_step = enc.source;
      obs.on_control(step, *ctrl);
    }
    state = generative_step(pl, state, pl.prompt, ctrl ? &*ctrl : nullptr, result.counter,
                            &hooks, branch_mode(step, fine, steps));
    result.trajectory.push_back(state);
  }
  return result;
}

DenoiseResult run_denoise(const Pipeline& pl, const CachePlan& control_plan,
                          const CachePlan& generative_plan, const FineCacheConfig& fine,
                          RunObserver* observer) {
  return run_denoise(pl, merge_plans(control_plan, generative_plan), fine, observer);
}

}  // namespace hgc
