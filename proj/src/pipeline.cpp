// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hgc/pipeline.hpp"

#include <cmath>
#include <string>

#include "hgc/error.hpp"
#include "hgc/rng.hpp"

namespace hgc {

void PipelineConfig::validate(const std::string& prefix) const {
  auto fail = [&](const std::string& field, const std::string& what) {
    throw ValidationError(prefix + "." + field + ": " + what);
  };
  if (t_control < 1) fail("t_control", "must be a positive integer");
  if (t_generative < 1) fail("t_generative", "must be a positive integer");
  if (t_control != t_generative) fail("t_control", "must equal t_generative");
  if (d_model == 0) fail("d_model", "must be a positive integer");
  if (latent_tokens == 0) fail("latent_tokens", "must be a positive integer");
  if (prompt_tokens == 0) fail("prompt_tokens", "must be a positive integer");
  if (d_prompt == 0) fail("d_prompt", "must be a positive integer");
  if (!(guidance_scale >= 0.0) || !std::isfinite(guidance_scale)) {
    fail("guidance_scale", "must be a finite value >= 0");
  }
  if (step_size && (!(*step_size > 0.0) || !std::isfinite(*step_size))) {
    fail("step_size", "must be a finite value > 0");
  }
}

std::size_t BlockWeights::parameter_count() const {
  return w_in.size() + w_q.size() + w_k.size() + w_v.size() + w_mlp1.size() + w_mlp2.size();
}

std::size_t Pipeline::parameter_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.parameter_count();
  return n;
}

namespace {

std::size_t input_dim(const PipelineConfig& c, BlockRole role) {
  return role == BlockRole::kGenDecoder ? 2 * c.d_model : c.d_model;
}

BlockWeights draw_block(const PipelineConfig& c, BlockRole role, Rng& rng) {
  const std::size_t d = c.d_model;
  BlockWeights w;
  w.w_in = Tensor::uniform(input_dim(c, role), d, rng, -kWeightRange, kWeightRange);
  w.w_q = Tensor::uniform(d, d, rng, -kWeightRange, kWeightRange);
  w.w_k = Tensor::uniform(c.d_prompt, d, rng, -kWeightRange, kWeightRange);
  w.w_v = Tensor::uniform(c.d_prompt, d, rng, -kWeightRange, kWeightRange);
  w.w_mlp1 = Tensor::uniform(d, 4 * d, rng, -kWeightRange, kWeightRange);
  w.w_mlp2 = Tensor::uniform(4 * d, d, rng, -kWeightRange, kWeightRange);
  return w;
}

}  // namespace

Pipeline init_pipeline(const PipelineConfig& config) {
  config.validate();
  Rng rng(config.seed);
  Pipeline pl;
  pl.config = config;
  for (BlockRole role : kAllRoles) pl.blocks[index_of(role)] = draw_block(config, role, rng);
  pl.condition =
      Tensor::uniform(config.latent_tokens, config.d_model, rng, -kInputRange, kInputRange);
  pl.prompt.p =
      Tensor::uniform(config.prompt_tokens, config.d_prompt, rng, -kPromptRange, kPromptRange);
  pl.prompt.p_null = Tensor::zeros(config.prompt_tokens, config.d_prompt);
  pl.initial_latent =
      Tensor::uniform(config.latent_tokens, config.d_model, rng, -kInputRange, kInputRange);
  return pl;
}

BlockMacs block_macs(const PipelineConfig& c, BlockRole role) {
  const std::uint64_t l = c.latent_tokens;
  const std::uint64_t d = c.d_model;
  const std::uint64_t p = c.prompt_tokens;
  const std::uint64_t dp = c.d_prompt;
  BlockMacs m;
  m.linear = l * input_dim(c, role) * d;
  // Q, K, V projections, scores, weighted sum.
  m.attention = l * d * d + 2 * p * dp * d + l * d * p + l * p * d;
  m.mlp = l * d * (4 * d) + l * (4 * d) * d;
  return m;
}

Tensor cross_attention(const Tensor& h, const Tensor& prompt, const BlockWeights& w,
                       MacCounter& counter, const MacTag& tag) {
  const Tensor q = matmul(h, w.w_q, counter, tag);
  const Tensor k = matmul(prompt, w.w_k, counter, tag);
  const Tensor v = matmul(prompt, w.w_v, counter, tag);
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(w.w_q.cols()));
  const Tensor scores = scale(matmul(q, transpose(k), counter, tag), inv_sqrt_d);
  return matmul(softmax_rows(scores), v, counter, tag);
}

BlockResult run_block_hooked(const Tensor& x, const Tensor& prompt, const BlockWeights& w,
                             MacCounter& counter, const MacTag& tag, const AttnHook& hook) {
  const Tensor h_pre = relu(matmul(x, w.w_in, counter, tag));
  Tensor attn = hook([&] { return cross_attention(h_pre, prompt, w, counter, tag); });
  if (attn.shape() != h_pre.shape()) {
    throw ShapeError("run_block: attention shape " + attn.shape_str() + " does not match " +
                     h_pre.shape_str());
  }
  const Tensor h = add(h_pre, attn);
  const Tensor mlp = matmul(relu(matmul(h, w.w_mlp1, counter, tag)), w.w_mlp2, counter, tag);
  return {add(h, mlp), std::move(attn)};
}

BlockResult run_block(const Tensor& x, const Tensor& prompt, const BlockWeights& w,
                      MacCounter& counter, const MacTag& tag,
                      const std::optional<Tensor>& attn_override) {
  return run_block_hooked(x, prompt, w, counter, tag, [&](const AttnCompute& compute) {
    return attn_override ? *attn_override : compute();
  });
}

std::optional<Tensor> BlockHooks::substitute(int, BlockRole, Branch) { return std::nullopt; }

void BlockHooks::computed(int, BlockRole, Branch, const Tensor&) {}

Tensor BlockHooks::attention(int, BlockRole, Branch, const AttnCompute& compute) {
  return compute();
}

namespace {

BlockHooks& default_hooks() {
  static BlockHooks hooks;
  return hooks;
}

Tensor forward_role(const Pipeline& pl, int step, BlockRole role, Branch branch,
                    const Tensor& input, const Tensor& prompt, MacCounter& counter,
                    BlockHooks& hooks) {
  if (auto stored = hooks.substitute(step, role, branch)) return std::move(*stored);
  const MacTag tag{step, role, branch};
  BlockResult r = run_block_hooked(
      input, prompt, pl.weights(role), counter, tag,
      [&](const AttnCompute& compute) { return hooks.attention(step, role, branch, compute); });
  hooks.computed(step, role, branch, r.out);
  return std::move(r.out);
}

Tensor generative_branch(const Pipeline& pl, int step, Branch branch, const Tensor& x,
                         const Tensor& prompt, const ControlOutput* ctrl, MacCounter& counter,
                         BlockHooks& hooks) {
  Tensor enc = forward_role(pl, step, BlockRole::kGenEncoder, branch, x, prompt, counter, hooks);
  if (ctrl) enc = add(enc, ctrl->enc);
  Tensor mid = forward_role(pl, step, BlockRole::kGenMid, branch, enc, prompt, counter, hooks);
  if (ctrl) mid = add(mid, ctrl->mid);
  return forward_role(pl, step, BlockRole::kGenDecoder, branch, concat_cols(enc, mid), prompt,
                      counter, hooks);
}

}  // namespace

ControlOutput control_step(const Pipeline& pl, const Tensor& x_cond, const Tensor& prompt,
                           int step, MacCounter& counter, BlockHooks* hooks) {
  BlockHooks& h = hooks ? *hooks : default_hooks();
  ControlOutput out;
  out.enc = forward_role(pl, step, BlockRole::kCtrlEncoder, Branch::kPrompt, x_cond, prompt,
                         counter, h);
  out.mid = forward_role(pl, step, BlockRole::kCtrlMid, Branch::kPrompt, out.enc, prompt,
                         counter, h);
  out.source_step = step;
  return out;
}

Tensor predict(const Pipeline& pl, const LatentState& state, const PromptEmbedding& prompt,
               const ControlOutput* ctrl, MacCounter& counter, BlockHooks* hooks,
               BranchMode mode) {
  BlockHooks& h = hooks ? *hooks : default_hooks();
  const int step = state.step + 1;
  if (ctrl && (ctrl->enc.shape() != state.x.shape() || ctrl->mid.shape() != state.x.shape())) {
    throw ShapeError("generative_step: control output shape does not match latent " +
                     state.x.shape_str());
  }
  if (mode == BranchMode::kSingle) {
    return generative_branch(pl, step, Branch::kFused, state.x, prompt.p, ctrl, counter, h);
  }
  const Tensor y_p =
      generative_branch(pl, step, Branch::kPrompt, state.x, prompt.p, ctrl, counter, h);
  const Tensor y_null =
      generative_branch(pl, step, Branch::kNull, state.x, prompt.p_null, ctrl, counter, h);
  return add(y_null, scale(sub(y_p, y_null), pl.config.guidance_scale));
}

LatentState generative_step(const Pipeline& pl, const LatentState& state,
                            const PromptEmbedding& prompt, const ControlOutput* ctrl,
                            MacCounter& counter, BlockHooks* hooks, BranchMode mode) {
  const Tensor y = predict(pl, state, prompt, ctrl, counter, hooks, mode);
  return {sub(state.x, scale(y, pl.config.effective_step_size())), state.step + 1};
}

}  // namespace hgc
