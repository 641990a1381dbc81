// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

// Test-only reference implementations. None of these call into the planner,
// the cache layers or the tensor kernels they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "hgc/cache_plan.hpp"
#include "hgc/pipeline.hpp"

namespace oracle {

// Compute steps of one arithmetic stride inside [lo, hi].
inline std::set<int> stride(int lo, int hi, int every) {
  std::set<int> s;
  for (int i = lo; i <= hi; i += every) s.insert(i);
  return s;
}

// Interval from a lambda given in tenths, rounded half up in integers.
inline int interval_tenths(int n, int lambda_tenths) {
  return std::max(1, (n * lambda_tenths + 5) / 10);
}

// Generative schedule, enumerated straight from the phase rules. Keys are
// role indices 2..4; values are the explicit decision for steps 1..t.
struct Schedule {
  std::map<int, std::vector<hgc::Decision>> by_role;
};

inline Schedule enumerate_schedule(int t, int n, int intra_tenths, int inter_tenths) {
  const int half = std::max(t / 2, 1);
  const int n_intra = interval_tenths(n, intra_tenths);
  const int n_inter = interval_tenths(n, inter_tenths);
  const std::set<int> latter = stride(half, t, n_inter);
  Schedule out;
  for (int role = 2; role <= 4; ++role) {
    std::set<int> computes = stride(1, half - 1, role == 2 ? n : n_intra);
    computes.insert(latter.begin(), latter.end());
    std::vector<hgc::Decision> column;
    for (int i = 1; i <= t; ++i) {
      if (computes.count(i)) {
        column.push_back(hgc::Decision::compute());
      } else {
        int src = 0;
        for (int c : computes) {
          if (c < i) src = c;
        }
        column.push_back(hgc::Decision::reuse(src));
      }
    }
    out.by_role[role] = column;
  }
  return out;
}

// Closed-form matmul MACs of one block.
struct BlockCost {
  std::uint64_t full = 0;
  std::uint64_t attention = 0;
};

inline BlockCost block_cost(const hgc::PipelineConfig& c, std::uint64_t in_dim) {
  const std::uint64_t l = c.latent_tokens, d = c.d_model, p = c.prompt_tokens, dp = c.d_prompt;
  const std::uint64_t linear = l * in_dim * d;
  const std::uint64_t attention = l * d * d + 2 * p * dp * d + 2 * l * d * p;
  const std::uint64_t mlp = 2 * l * d * 4 * d;
  return {linear + attention + mlp, attention};
}

inline BlockCost role_cost(const hgc::PipelineConfig& c, int role) {
  return block_cost(c, role == 4 ? 2 * c.d_model : c.d_model);
}

inline std::uint64_t parameter_count(const hgc::PipelineConfig& c) {
  const std::uint64_t d = c.d_model, dp = c.d_prompt;
  std::uint64_t total = 0;
  for (int role = 0; role < 5; ++role) {
    const std::uint64_t in = role == 4 ? 2 * d : d;
    total += in * d + d * d + 2 * dp * d + 2 * d * 4 * d;
  }
  return total;
}

// Sum over computed (step, role, branch) of the block cost, less attention
// maps served from the fine cache: control maps after step 1 and generative
// maps after the gate, where one branch runs.
inline std::uint64_t planned_macs(const hgc::PipelineConfig& c, const hgc::CachePlan& plan,
                                  bool fine_control, bool fine_generative, int gate) {
  std::uint64_t total = 0;
  for (int step = 1; step <= plan.horizon(); ++step) {
    for (int role = 0; role < 5; ++role) {
      const auto r = static_cast<hgc::BlockRole>(role);
      if (plan.at(step, r).kind != hgc::DecisionKind::kCompute) continue;
      const BlockCost cost = role_cost(c, role);
      if (role < 2) {
        total += (fine_control && step > 1) ? cost.full - cost.attention : cost.full;
      } else if (fine_generative && step > gate) {
        total += cost.full - cost.attention;
      } else {
        total += 2 * cost.full;
      }
    }
  }
  return total;
}

// Straight-line uncached forward with its own loops, mirroring the
// arithmetic order of the library kernels so results compare bit-for-bit.
using Mat = std::vector<double>;

struct Dims {
  std::size_t rows, cols;
};

inline Mat mm(const Mat& a, Dims da, const Mat& b, Dims db) {
  Mat out(da.rows * db.cols, 0.0);
  for (std::size_t i = 0; i < da.rows; ++i) {
    for (std::size_t p = 0; p < da.cols; ++p) {
      const double av = a[i * da.cols + p];
      for (std::size_t j = 0; j < db.cols; ++j) out[i * db.cols + j] += av * b[p * db.cols + j];
    }
  }
  return out;
}

inline Mat raw(const hgc::Tensor& t) { return Mat(t.data().begin(), t.data().end()); }

inline Mat block(const hgc::BlockWeights& w, const Mat& x, std::size_t in_dim,
                 const Mat& prompt, const hgc::PipelineConfig& c) {
  const std::size_t l = c.latent_tokens, d = c.d_model, p = c.prompt_tokens, dp = c.d_prompt;
  Mat h = mm(x, {l, in_dim}, raw(w.w_in), {in_dim, d});
  for (double& v : h) v = v > 0.0 ? v : 0.0;
  const Mat q = mm(h, {l, d}, raw(w.w_q), {d, d});
  const Mat k = mm(prompt, {p, dp}, raw(w.w_k), {dp, d});
  const Mat v = mm(prompt, {p, dp}, raw(w.w_v), {dp, d});
  Mat kt(d * p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < d; ++j) kt[j * p + i] = k[i * d + j];
  }
  Mat s = mm(q, {l, d}, kt, {d, p});
  const double inv = 1.0 / std::sqrt(static_cast<double>(d));
  for (double& e : s) e *= inv;
  for (std::size_t i = 0; i < l; ++i) {
    double mx = s[i * p];
    for (std::size_t j = 1; j < p; ++j) mx = std::max(mx, s[i * p + j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      s[i * p + j] = std::exp(s[i * p + j] - mx);
      sum += s[i * p + j];
    }
    for (std::size_t j = 0; j < p; ++j) s[i * p + j] /= sum;
  }
  const Mat attn = mm(s, {l, p}, v, {p, d});
  for (std::size_t i = 0; i < h.size(); ++i) h[i] += attn[i];
  Mat hidden = mm(h, {l, d}, raw(w.w_mlp1), {d, 4 * d});
  for (double& e : hidden) e = e > 0.0 ? e : 0.0;
  const Mat mlp = mm(hidden, {l, 4 * d}, raw(w.w_mlp2), {4 * d, d});
  for (std::size_t i = 0; i < h.size(); ++i) h[i] += mlp[i];
  return h;
}

// Latents after steps 1..T with control injected at every step.
inline std::vector<Mat> reference_trajectory(const hgc::Pipeline& pl) {
  const hgc::PipelineConfig& c = pl.config;
  const std::size_t l = c.latent_tokens, d = c.d_model;
  const auto& w = pl.blocks;
  const Mat cond = raw(pl.condition);
  const Mat prompts[2] = {raw(pl.prompt.p), raw(pl.prompt.p_null)};
  Mat x = raw(pl.initial_latent);
  std::vector<Mat> out;
  for (int step = 1; step <= c.t_generative; ++step) {
    Mat xc = x;
    for (std::size_t i = 0; i < xc.size(); ++i) xc[i] += cond[i];
    const Mat ce = block(w[0], xc, d, prompts[0], c);
    const Mat cm = block(w[1], ce, d, prompts[0], c);
    Mat y[2];
    for (int b = 0; b < 2; ++b) {
      Mat e = block(w[2], x, d, prompts[b], c);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += ce[i];
      Mat m = block(w[3], e, d, prompts[b], c);
      for (std::size_t i = 0; i < m.size(); ++i) m[i] += cm[i];
      Mat cat(l * 2 * d);
      for (std::size_t r = 0; r < l; ++r) {
        for (std::size_t j = 0; j < d; ++j) {
          cat[r * 2 * d + j] = e[r * d + j];
          cat[r * 2 * d + d + j] = m[r * d + j];
        }
      }
      y[b] = block(w[4], cat, 2 * d, prompts[b], c);
    }
    const double g = c.guidance_scale;
    const double eta = c.step_size ? *c.step_size : 1.0 / c.t_generative;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double pred = y[1][i] + (y[0][i] - y[1][i]) * g;
      x[i] = x[i] - pred * eta;
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace oracle
