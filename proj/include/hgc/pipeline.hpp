// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "hgc/mac_counter.hpp"
#include "hgc/roles.hpp"
#include "hgc/tensor.hpp"

namespace hgc {

struct PipelineConfig {
  int t_control = 20;
  int t_generative = 20;
  std::size_t d_model = 16;
  std::size_t latent_tokens = 8;
  std::size_t prompt_tokens = 4;
  std::size_t d_prompt = 16;
  double guidance_scale = 7.5;
  // Unset means 1 / t_generative.
  std::optional<double> step_size;
  std::uint64_t seed = 0;

  double effective_step_size() const {
    return step_size ? *step_size : 1.0 / static_cast<double>(t_generative);
  }

  // Throws ValidationError naming the offending field under `prefix`.
  void validate(const std::string& prefix = "pipeline") const;
  bool operator==(const PipelineConfig&) const = default;
};

// One block: linear -> relu -> cross-attention over the prompt -> MLP, with
// residuals. The decoder's w_in takes the 2*d_model concatenated input.
struct BlockWeights {
  Tensor w_in;    // [in_dim x d_model]
  Tensor w_q;     // [d_model x d_model]
  Tensor w_k;     // [d_prompt x d_model]
  Tensor w_v;     // [d_prompt x d_model]
  Tensor w_mlp1;  // [d_model x 4*d_model]
  Tensor w_mlp2;  // [4*d_model x d_model]

  std::size_t parameter_count() const;
};

struct PromptEmbedding {
  Tensor p;       // [prompt_tokens x d_prompt]
  Tensor p_null;  // same shape, exactly zero
};

struct LatentState {
  Tensor x;      // [latent_tokens x d_model]
  int step = 0;  // number of completed denoising steps
};

struct ControlOutput {
  Tensor enc;
  Tensor mid;
  int source_step = 0;
};

struct Pipeline {
  PipelineConfig config;
  std::array<BlockWeights, kNumRoles> blocks;
  Tensor condition;  // [latent_tokens x d_model], fixed for the run
  PromptEmbedding prompt;
  Tensor initial_latent;

  const BlockWeights& weights(BlockRole role) const { return blocks[index_of(role)]; }
  std::size_t parameter_count() const;
};

// Draws, from one SplitMix64 stream seeded with config.seed and in this
// order: the blocks (ctrl encoder, ctrl mid, gen encoder, gen mid, gen
// decoder; within a block w_in, w_q, w_k, w_v, w_mlp1, w_mlp2; weights in
// [-0.1, 0.1)), then the condition (in [-1, 1)), the prompt (in [-48, 48))
// and the initial latent (in [-1, 1)). The wide prompt range makes the
// attention softmax sharp enough that its routing follows the latent.
Pipeline init_pipeline(const PipelineConfig& config);

inline constexpr double kWeightRange = 0.1;
inline constexpr double kInputRange = 1.0;
inline constexpr double kPromptRange = 48.0;

// Closed-form MAC counts of one block forward at the given dimensions.
struct BlockMacs {
  std::uint64_t linear = 0;
  std::uint64_t attention = 0;
  std::uint64_t mlp = 0;
  std::uint64_t total() const { return linear + attention + mlp; }
};
BlockMacs block_macs(const PipelineConfig& config, BlockRole role);

using AttnCompute = std::function<Tensor()>;
using AttnHook = std::function<Tensor(const AttnCompute&)>;

// softmax((h Wq)(p Wk)^T / sqrt(d_model)) (p Wv).
Tensor cross_attention(const Tensor& h, const Tensor& prompt, const BlockWeights& weights,
                       MacCounter& counter, const MacTag& tag);

struct BlockResult {
  Tensor out;
  Tensor attn;
};

// h_pre = relu(x w_in); attn = override or cross_attention(h_pre);
// h = h_pre + attn; out = h + relu(h w_mlp1) w_mlp2.
BlockResult run_block(const Tensor& x, const Tensor& prompt, const BlockWeights& weights,
                      MacCounter& counter, const MacTag& tag,
                      const std::optional<Tensor>& attn_override = std::nullopt);

// As run_block, but the attention tensor comes from `hook`, which receives the
// deferred computation and decides whether to invoke it.
BlockResult run_block_hooked(const Tensor& x, const Tensor& prompt,
                             const BlockWeights& weights, MacCounter& counter,
                             const MacTag& tag, const AttnHook& hook);

// Per-block interception points used by the caching layers. The defaults run
// every block and every attention map.
class BlockHooks {
 public:
  virtual ~BlockHooks() = default;

  // A stored output to use instead of running the block.
  virtual std::optional<Tensor> substitute(int step, BlockRole role, Branch branch);
  virtual void computed(int step, BlockRole role, Branch branch, const Tensor& out);
  virtual Tensor attention(int step, BlockRole role, Branch branch,
                           const AttnCompute& compute);
};

// Dual runs the prompt and null-prompt branches and applies classifier-free
// guidance. Single runs one pass (tagged kFused) and uses its output directly.
enum class BranchMode { kDual, kSingle };

// enc = e^C(x_cond; p), mid = m^C(enc; p). The control module runs on the
// prompt branch only.
ControlOutput control_step(const Pipeline& pipeline, const Tensor& x_cond, const Tensor& prompt,
                           int step, MacCounter& counter, BlockHooks* hooks = nullptr);

// Prediction for the step after `state`, with control injection when `ctrl`
// is present. Dual mode: y = y_null + g * (y_p - y_null).
Tensor predict(const Pipeline& pipeline, const LatentState& state, const PromptEmbedding& prompt,
               const ControlOutput* ctrl, MacCounter& counter, BlockHooks* hooks = nullptr,
               BranchMode mode = BranchMode::kDual);

// x <- x - step_size * predict(...).
LatentState generative_step(const Pipeline& pipeline, const LatentState& state,
                            const PromptEmbedding& prompt, const ControlOutput* ctrl,
                            MacCounter& counter, BlockHooks* hooks = nullptr,
                            BranchMode mode = BranchMode::kDual);

}  // namespace hgc
