// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hgc/cache_plan.hpp"
#include "hgc/coarse_cache.hpp"
#include "hgc/fine_cache.hpp"
#include "hgc/metrics.hpp"
#include "hgc/pipeline.hpp"

namespace hgc {

enum class RunMode { kNoCache, kUniform, kHgc };
enum class ControlLatter { kSkip, kReuse };
enum class TauCMode { kCalibrate, kFixed };

struct ConditionWindow {
  int start = 1;
  int end = 1;
  bool operator==(const ConditionWindow&) const = default;
};

struct ExperimentConfig {
  PipelineConfig pipeline;
  CoarseCacheConfig coarse;
  FineCacheConfig fine;
  RunMode mode = RunMode::kHgc;
  int uniform_interval = 5;
  ControlLatter control_latter = ControlLatter::kSkip;
  TauCMode tau_c_mode = TauCMode::kFixed;
  int tau_c = 6;
  std::optional<ConditionWindow> condition_window;
  std::string output_dir = "hgc_out";

  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
// Strict: unknown keys and wrongly typed values raise ValidationError with
// the dotted field path. Missing keys keep their defaults.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig parse_config(const std::string& text);

// Applies "a.b.c=value" to a config. The value is read as JSON when it parses
// as JSON and as a plain string otherwise.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

struct ResolvedPlan {
  CachePlan plan;
  FineCacheConfig fine;
  std::optional<int> tau_c;
};

// The merged plan and fine-cache settings a config runs with. Calibrates
// tau_c when the config asks for it.
ResolvedPlan resolve_plan(const ExperimentConfig& cfg, const Pipeline& pipeline);

// Runs the configured experiment and a same-seed uncached reference.
RunReport execute(const ExperimentConfig& cfg);

// Command entry points. Each writes its files under `out_dir` and returns the
// text to print.
std::string cmd_run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
std::string cmd_plan(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
std::string cmd_calibrate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);
std::string cmd_ablate(const ExperimentConfig& cfg, const std::string& param,
                       const std::vector<double>& values, const std::filesystem::path& out_dir);
std::string cmd_window(const ExperimentConfig& cfg, const std::vector<ConditionWindow>& windows,
                       const std::filesystem::path& out_dir);
std::string cmd_compare(const std::filesystem::path& report_a,
                        const std::filesystem::path& report_b,
                        const std::filesystem::path& out_dir);

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, const std::string& param,
                                  const std::vector<double>& values);

struct WindowResult {
  ConditionWindow window;
  double final_l2_rel = 0.0;
  double final_cosine = 1.0;
  std::uint64_t macs_total = 0;
};
std::vector<WindowResult> run_windows(const ExperimentConfig& cfg,
                                      const std::vector<ConditionWindow>& windows);

}  // namespace hgc
