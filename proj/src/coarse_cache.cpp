// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hgc/coarse_cache.hpp"

#include <algorithm>
#include <cmath>

#include "hgc/denoise.hpp"
#include "hgc/error.hpp"

namespace hgc {

void CoarseCacheConfig::validate(const std::string& prefix) const {
  auto in_unit = [&](double v, const char* field) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(prefix + "." + field + ": must be in [0, 1]");
  };
  in_unit(theta, "theta");
  in_unit(lambda_intra, "lambda_intra");
  in_unit(lambda_inter, "lambda_inter");
  if (n_base < 1) throw ValidationError(prefix + ".n_base: must be a positive integer");
}

SimilarityMatrix::SimilarityMatrix(int half) : half_(half) {
  if (half < 0) throw ValidationError("similarity: negative size");
  const auto h = static_cast<std::size_t>(half);
  values_.assign(h * (h - (h > 0 ? 1 : 0)) / 2, 0.0);
}

std::size_t SimilarityMatrix::slot(int i, int j) const {
  if (i < 1 || j <= i || j > half_) {
    throw ValidationError("similarity: no entry (" + std::to_string(i) + ", " +
                          std::to_string(j) + ") for half = " + std::to_string(half_));
  }
  // Rows 1..i-1 hold (half-1) + (half-2) + ... entries.
  const auto n = static_cast<std::size_t>(half_);
  const auto r = static_cast<std::size_t>(i - 1);
  return r * n - r * (r + 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

double SimilarityMatrix::at(int i, int j) const { return values_[slot(i, j)]; }

void SimilarityMatrix::set(int i, int j, double value) {
  if (!(value >= -1.0 && value <= 1.0)) {
    throw ValidationError("similarity: entry outside [-1, 1]");
  }
  values_[slot(i, j)] = value;
}

SimilarityMatrix control_similarity(std::span<const ControlOutput> outputs, int half) {
  if (half < 0 || outputs.size() < static_cast<std::size_t>(half)) {
    throw ValidationError("control_similarity: need at least " + std::to_string(half) +
                          " control outputs, got " + std::to_string(outputs.size()));
  }
  SimilarityMatrix sim(half);
  for (int i = 1; i <= half; ++i) {
    for (int j = i + 1; j <= half; ++j) {
      const ControlOutput& a = outputs[static_cast<std::size_t>(i - 1)];
      const ControlOutput& b = outputs[static_cast<std::size_t>(j - 1)];
      sim.set(i, j, 0.5 * (cosine_flat(a.enc, b.enc) + cosine_flat(a.mid, b.mid)));
    }
  }
  return sim;
}

int select_tau_c(const SimilarityMatrix& sim, double theta) {
  const int half = sim.half();
  for (int i = 1; i < half; ++i) {
    bool all_above = true;
    for (int j = i + 1; j <= half && all_above; ++j) all_above = sim.at(i, j) > theta;
    if (all_above) return i;
  }
  return half;
}

CachePlan build_control_plan(int t_control, int tau_c, bool latter_reuse) {
  const int half = t_control / 2;
  if (tau_c < 1 || tau_c > half) {
    throw ValidationError("tau_c: must be in [1, " + std::to_string(half) + "], got " +
                          std::to_string(tau_c));
  }
  CachePlan plan(t_control);
  for (int step = tau_c + 1; step <= t_control; ++step) {
    const Decision d = (step <= half || latter_reuse) ? Decision::reuse(tau_c) : Decision::skip();
    for (BlockRole role : kControlRoles) plan.set(step, role, d);
  }
  return plan;
}

int effective_interval(int n_base, double lambda) {
  if (n_base < 1) throw ValidationError("effective_interval: n_base must be >= 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ValidationError("effective_interval: lambda must be in [0, 1]");
  }
  if (lambda == 0.0) return 1;
  // The epsilon keeps products such as 5 * 0.3 on the intended side of .5.
  const auto rounded = static_cast<int>(std::floor(n_base * lambda + 0.5 + 1e-9));
  return std::max(rounded, 1);
}

namespace {

// Compute at anchor, anchor+interval, ... within [first, last]; Reuse of the
// latest Compute elsewhere.
void fill_strided(CachePlan& plan, BlockRole role, int first, int last, int anchor,
                  int interval) {
  int latest = 0;
  for (int step = first; step <= last; ++step) {
    if (step >= anchor && (step - anchor) % interval == 0) {
      plan.set(step, role, Decision::compute());
      latest = step;
    } else {
      plan.set(step, role, Decision::reuse(latest));
    }
  }
}

}  // namespace

CachePlan build_generative_plan(int t_generative, const CoarseCacheConfig& cfg) {
  cfg.validate();
  CachePlan plan(t_generative);
  const int boundary = std::max(t_generative / 2, 1);
  const int n_intra = effective_interval(cfg.n_base, cfg.lambda_intra);
  const int n_inter = effective_interval(cfg.n_base, cfg.lambda_inter);
  const int former_last = boundary - 1;
  if (former_last >= 1) {
    fill_strided(plan, BlockRole::kGenEncoder, 1, former_last, 1, cfg.n_base);
    fill_strided(plan, BlockRole::kGenMid, 1, former_last, 1, n_intra);
    fill_strided(plan, BlockRole::kGenDecoder, 1, former_last, 1, n_intra);
  }
  for (BlockRole role : kGenerativeRoles) {
    fill_strided(plan, role, boundary, t_generative, boundary, n_inter);
  }
  return plan;
}

CachePlan build_uniform_plan(int t, int n) {
  if (n < 1) throw ValidationError("uniform_interval: must be a positive integer");
  CachePlan plan(t);
  for (BlockRole role : kGenerativeRoles) fill_strided(plan, role, 1, t, 1, n);
  return plan;
}

namespace {

class ControlCollector : public RunObserver {
 public:
  explicit ControlCollector(int limit) : limit_(limit) {}
  void on_control(int step, const ControlOutput& ctrl) override {
    if (step <= limit_) outputs.push_back(ctrl);
  }
  std::vector<ControlOutput> outputs;

 private:
  int limit_;
};

}  // namespace

int calibrate(const Pipeline& pipeline, double theta, SimilarityMatrix* sim_out) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ValidationError("coarse.theta: must be in [0, 1]");
  const int half = pipeline.config.t_control / 2;
  ControlCollector collector(half);
  run_denoise(pipeline, all_compute_plan(pipeline.config.t_generative),
              FineCacheConfig::disabled(), &collector);
  SimilarityMatrix sim = control_similarity(collector.outputs, half);
  const int tau = select_tau_c(sim, theta);
  if (sim_out) *sim_out = std::move(sim);
  return tau;
}

}  // namespace hgc
