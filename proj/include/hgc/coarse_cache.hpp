// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "hgc/cache_plan.hpp"
#include "hgc/pipeline.hpp"

namespace hgc {

struct CoarseCacheConfig {
  bool enabled = true;
  double theta = 0.9;
  int n_base = 5;
  double lambda_intra = 0.4;
  double lambda_inter = 0.6;

  void validate(const std::string& prefix = "coarse") const;
  bool operator==(const CoarseCacheConfig&) const = default;
};

// Pairwise similarity of the first `half` control outputs. Entry (i, j) is
// stored for 1 <= i < j <= half.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(int half);

  int half() const { return half_; }
  std::size_t entry_count() const { return values_.size(); }

  double at(int i, int j) const;
  void set(int i, int j, double value);

 private:
  std::size_t slot(int i, int j) const;

  int half_ = 0;
  std::vector<double> values_;
};

// a(i, j) = (cos(enc_i, enc_j) + cos(mid_i, mid_j)) / 2 over the first
// `half` outputs.
SimilarityMatrix control_similarity(std::span<const ControlOutput> outputs, int half);

// Smallest i whose entries a(i, j), j in (i, half], all exceed theta. Row
// `half` has no entries and always qualifies.
int select_tau_c(const SimilarityMatrix& sim, double theta);

// Steps 1..tau_c compute, tau_c+1..floor(T/2) reuse tau_c, later steps skip
// (or reuse tau_c when `latter_reuse`). Generative roles are all Compute.
CachePlan build_control_plan(int t_control, int tau_c, bool latter_reuse = false);

// round-half-up(n_base * lambda), at least 1. lambda = 0 disables partial
// caching and yields 1.
int effective_interval(int n_base, double lambda);

// Two-phase generative schedule. Former phase [1, half-1]: the encoder
// computes every N steps from step 1, mid and decoder every N_intra steps.
// Latter phase [half, T]: all three compute every N_inter steps from `half`.
// Every other entry reuses the most recent Compute of its role. Control roles
// are all Compute.
CachePlan build_generative_plan(int t_generative, const CoarseCacheConfig& cfg);

// DeepCache-style baseline: generative roles compute at 1, 1+n, 1+2n, ...
CachePlan build_uniform_plan(int t, int n);

// Runs the uncached pipeline, collects the control outputs of steps
// 1..floor(T_C/2) and returns the selected tau_c. `sim_out`, when given,
// receives the similarity matrix.
int calibrate(const Pipeline& pipeline, double theta, SimilarityMatrix* sim_out = nullptr);

}  // namespace hgc
