// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hgc/fine_cache.hpp"

#include "hgc/error.hpp"

namespace hgc {

void FineCacheConfig::validate(int t_generative, const std::string& prefix) const {
  const int gate = effective_gate(t_generative);
  if (gate < 1 || gate > t_generative) {
    throw ValidationError(prefix + ".gate_step: must be in [1, " + std::to_string(t_generative) +
                          "], got " + std::to_string(gate));
  }
}

Tensor gate_fuse(const Tensor& f_p, const Tensor& f_np) {
  if (f_p.shape() != f_np.shape()) {
    throw ShapeError("gate_fuse: shape mismatch " + f_p.shape_str() + " vs " + f_np.shape_str());
  }
  return scale(add(f_p, f_np), 0.5);
}

BranchMode branch_mode(int step, const FineCacheConfig& cfg, int t_generative) {
  if (!cfg.enabled_generative) return BranchMode::kDual;
  return step <= cfg.effective_gate(t_generative) ? BranchMode::kDual : BranchMode::kSingle;
}

AttnCache::AttnCache(FineCacheConfig config, int t_generative)
    : config_(config), gate_(config.effective_gate(t_generative)) {}

AttnRead AttnCache::control(BlockRole site, int step, const AttnCompute& compute) {
  if (!config_.enabled_control) return {compute(), AttnOrigin::kComputed};
  auto& slot = control_maps_[index_of(site)];
  if (step == 1) {
    slot = compute();
    return {*slot, AttnOrigin::kComputed};
  }
  if (!slot) {
    throw CacheOrderError("attention cache: control site " + std::string(to_string(site)) +
                          " read at step " + std::to_string(step) + " before step 1");
  }
  return {*slot, AttnOrigin::kControlStepOne};
}

bool AttnCache::try_fuse(GenerativeSite& site) {
  if (site.prompt && site.null && site.prompt->step == site.null->step) {
    site.fused = gate_fuse(site.prompt->value, site.null->value);
    return true;
  }
  return false;
}

AttnRead AttnCache::generative(BlockRole site, int step, Branch branch,
                               const AttnCompute& compute) {
  if (!config_.enabled_generative) return {compute(), AttnOrigin::kComputed};
  GenerativeSite& s = generative_sites_[index_of(site)];
  if (step <= gate_) {
    Tensor value = compute();
    if (branch == Branch::kPrompt) {
      s.prompt = PendingMap{step, value};
    } else if (branch == Branch::kNull) {
      s.null = PendingMap{step, value};
    }
    if (step == gate_) try_fuse(s);
    return {std::move(value), AttnOrigin::kComputed};
  }
  if (!s.fused && !try_fuse(s)) {
    throw CacheOrderError("attention cache: generative site " + std::string(to_string(site)) +
                          " has no fused map at step " + std::to_string(step));
  }
  return {*s.fused, AttnOrigin::kFused};
}

const Tensor* AttnCache::control_map(BlockRole site) const {
  const auto& slot = control_maps_[index_of(site)];
  return slot ? &*slot : nullptr;
}

const Tensor* AttnCache::fused(BlockRole site) const {
  const auto& f = generative_sites_[index_of(site)].fused;
  return f ? &*f : nullptr;
}

}  // namespace hgc
