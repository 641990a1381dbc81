// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hgc/mac_counter.hpp"
#include "hgc/pipeline.hpp"

namespace hgc {

struct LedgerEntry {
  int step = 0;
  BlockRole role = BlockRole::kGenEncoder;
  Branch branch = Branch::kPrompt;
  std::uint64_t macs = 0;
};

// Aggregated view of a run's MacCounter. Former phase is steps below
// floor(T/2); the latter phase starts at floor(T/2).
class MacLedger {
 public:
  MacLedger() = default;
  MacLedger(const MacCounter& counter, int t_generative);

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t control_total() const { return control_; }
  std::uint64_t generative_total() const { return generative_; }
  std::uint64_t former_total() const { return former_; }
  std::uint64_t latter_total() const { return latter_; }

  // Sum over the given step for control or generative roles.
  std::uint64_t step_total(int step, bool generative) const;

 private:
  std::vector<LedgerEntry> entries_;
  std::uint64_t total_ = 0;
  std::uint64_t control_ = 0;
  std::uint64_t generative_ = 0;
  std::uint64_t former_ = 0;
  std::uint64_t latter_ = 0;
};

struct DriftPoint {
  int step = 0;
  double l2_rel = 0.0;
  double cosine = 1.0;
};

struct DriftReport {
  std::vector<DriftPoint> per_step;
  double final_l2_rel = 0.0;
  double final_cosine = 1.0;
};

inline constexpr double kDriftEpsilon = 1e-12;

// Per step: |a - b| / max(|a|, eps) and cosine(a, b). When both latents are
// zero the cosine is 1; when exactly one is, 0.
DriftReport drift(const std::vector<LatentState>& a, const std::vector<LatentState>& b);

// base.total / cached.total. Throws ValidationError on a zero total.
double speedup(const MacLedger& base, const MacLedger& cached);

struct RunReport {
  nlohmann::json config;
  std::string plan_digest;
  std::optional<int> tau_c;
  MacLedger ledger;
  std::uint64_t baseline_macs = 0;
  DriftReport drift;
  double speedup_macs = 1.0;
};

nlohmann::json to_json(const RunReport& report);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

std::string ledger_csv(const MacLedger& ledger);
std::string drift_csv(const DriftReport& drift);

// Writes ledger.csv and drift.csv into `dir`.
void emit_csv(const RunReport& report, const std::filesystem::path& dir);
void emit_report_json(const RunReport& report, const std::filesystem::path& dir);

struct SweepPoint {
  std::string param;
  double value = 0.0;
  std::uint64_t macs_total = 0;
  double final_l2_rel = 0.0;
  double final_cosine = 1.0;
  double speedup = 1.0;
};

std::string plot_data_csv(const std::vector<SweepPoint>& points);
void emit_plot_data(const std::vector<SweepPoint>& points, const std::filesystem::path& path);

struct CompareRow {
  std::string metric;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;  // b - a
};

// Headline metrics of two report.json documents.
std::vector<CompareRow> compare_reports(const nlohmann::json& a, const nlohmann::json& b);
std::string compare_csv(const std::vector<CompareRow>& rows);
std::string format_compare_table(const std::vector<CompareRow>& rows);

// Writes `text` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace hgc
