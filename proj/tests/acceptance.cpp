// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance harness: one PASS/FAIL line per criterion, non-zero exit when
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hgc/coarse_cache.hpp"
#include "hgc/denoise.hpp"
#include "hgc/experiment.hpp"
#include "hgc/fine_cache.hpp"
#include "hgc/metrics.hpp"
#include "hgc/rng.hpp"
#include "oracles.hpp"

using namespace hgc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail = what;
    }
  }
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hgc_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

bool same_files(const fs::path& a, const fs::path& b, int& count) {
  for (const auto& entry : fs::directory_iterator(a)) {
    ++count;
    const fs::path other = b / entry.path().filename();
    if (!fs::exists(other) || read_text_file(entry.path()) != read_text_file(other)) return false;
  }
  return true;
}

ExperimentConfig nocache_config() {
  ExperimentConfig cfg;
  cfg.mode = RunMode::kNoCache;
  return cfg;
}

// 1. nocache mode and an all-Compute plan are bit-identical to the
// straight-line reference loop, and drift.csv is all zeros.
Outcome no_cache_identity() {
  Outcome o;
  const auto start = Clock::now();
  const ExperimentConfig cfg = nocache_config();
  const Pipeline pl = init_pipeline(cfg.pipeline);
  const ResolvedPlan resolved = resolve_plan(cfg, pl);
  o.require(resolved.plan == all_compute_plan(cfg.pipeline.t_generative),
            "nocache plan is not all-Compute");
  const DenoiseResult run = run_denoise(pl, resolved.plan, resolved.fine);
  const DenoiseResult plain =
      run_denoise(pl, all_compute_plan(cfg.pipeline.t_generative), FineCacheConfig::disabled());
  const std::vector<oracle::Mat> ref = oracle::reference_trajectory(pl);
  o.require(run.trajectory.size() == ref.size(), "trajectory length");
  for (std::size_t i = 0; i < run.trajectory.size() && i < ref.size(); ++i) {
    o.require(bit_equal(run.trajectory[i].x, plain.trajectory[i].x),
              "nocache differs from all-Compute at step " + std::to_string(i + 1));
    o.require(oracle::raw(run.trajectory[i].x) == ref[i],
              "differs from reference loop at step " + std::to_string(i + 1));
  }

  const fs::path dir = scratch("c1");
  cmd_run(cfg, dir);
  std::istringstream drift(read_text_file(dir / "drift.csv"));
  std::string line;
  std::getline(drift, line);
  int rows = 0;
  while (std::getline(drift, line)) {
    ++rows;
    o.require(line.size() > 4 && line.substr(line.find(',')) == ",0,1",
              "non-zero drift row: " + line);
  }
  o.require(rows == cfg.pipeline.t_generative, "drift.csv row count");
  const double elapsed = seconds_since(start);
  o.require(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
  if (o.pass) o.detail = std::to_string(rows) + " steps bit-identical, runtime " +
                         std::to_string(elapsed) + " s";
  return o;
}

// 2. build_generative_plan against the brute-force phase-rule enumerator.
Outcome schedule_oracle() {
  Outcome o;
  Rng rng(20261016);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int t = 4 + static_cast<int>(rng.next_u64() % 37);
    const int n = 1 + static_cast<int>(rng.next_u64() % 8);
    const int li = 2 * static_cast<int>(rng.next_u64() % 6);
    const int le = 2 * static_cast<int>(rng.next_u64() % 6);
    CoarseCacheConfig cfg;
    cfg.n_base = n;
    cfg.lambda_intra = li / 10.0;
    cfg.lambda_inter = le / 10.0;
    const CachePlan plan = build_generative_plan(t, cfg);
    const oracle::Schedule want = oracle::enumerate_schedule(t, n, li, le);
    for (int role = 2; role <= 4; ++role) {
      for (int i = 1; i <= t; ++i) {
        ++checked;
        o.require(plan.at(i, static_cast<BlockRole>(role)) == want.by_role.at(role)[i - 1],
                  "mismatch at T=" + std::to_string(t) + " N=" + std::to_string(n) +
                      " step " + std::to_string(i));
      }
    }
  }
  if (o.pass) o.detail = "200 configurations, " + std::to_string(checked) + " decisions";
  return o;
}

int scan_tau(const SimilarityMatrix& sim, double theta) {
  const int half = sim.half();
  std::vector<bool> ok(half + 1, true);
  for (int i = 1; i <= half; ++i) {
    for (int j = i + 1; j <= half; ++j) ok[i] = ok[i] && sim.at(i, j) > theta;
  }
  for (int i = 1; i <= half; ++i) {
    if (ok[i]) return i;
  }
  return half;
}

// 3. select_tau_c against exhaustive row scanning, plus threshold endpoints.
Outcome tau_oracle() {
  Outcome o;
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int half = 2 + static_cast<int>(rng.next_u64() % 14);
    SimilarityMatrix sim(half);
    for (int i = 1; i <= half; ++i) {
      for (int j = i + 1; j <= half; ++j) sim.set(i, j, rng.next_uniform(0.5, 1.0));
    }
    for (int k = 0; k <= 20; ++k) {
      const double theta = k / 20.0;
      o.require(select_tau_c(sim, theta) == scan_tau(sim, theta),
                "trial " + std::to_string(trial) + " theta " + std::to_string(theta));
    }
  }
  const Pipeline pl = init_pipeline({});
  const int at0 = calibrate(pl, 0.0);
  const int at9 = calibrate(pl, 0.9);
  const int at1 = calibrate(pl, 1.0);
  SimilarityMatrix sim;
  calibrate(pl, 0.9, &sim);
  o.require(at9 == scan_tau(sim, 0.9), "calibrated tau_c disagrees with scan");
  o.require(at0 == 1, "theta=0 gives " + std::to_string(at0));
  o.require(at1 == 10, "theta=1 gives " + std::to_string(at1));
  if (o.pass) {
    o.detail = "100 matrices; toy tau_c theta 0/0.9/1 = " + std::to_string(at0) + "/" +
               std::to_string(at9) + "/" + std::to_string(at1);
  }
  return o;
}

std::uint64_t oracle_total(const ExperimentConfig& cfg, const ResolvedPlan& r) {
  return oracle::planned_macs(cfg.pipeline, r.plan, r.fine.enabled_control,
                              r.fine.enabled_generative,
                              r.fine.effective_gate(cfg.pipeline.t_generative));
}

// 4. Ledger grand total equals the closed-form sum over computed entries.
Outcome ledger_closed_form() {
  Outcome o;
  const ExperimentConfig cfg;
  const Pipeline pl = init_pipeline(cfg.pipeline);
  const ResolvedPlan resolved = resolve_plan(cfg, pl);
  const RunReport report = execute(cfg);
  const std::uint64_t want = oracle_total(cfg, resolved);
  const oracle::BlockCost enc = oracle::role_cost(cfg.pipeline, 2);
  o.require(enc.full == 23552, "block MACs " + std::to_string(enc.full));
  o.require(report.ledger.total() == want,
            std::to_string(report.ledger.total()) + " != " + std::to_string(want));
  if (o.pass) o.detail = "ledger " + std::to_string(report.ledger.total()) + " == oracle";
  return o;
}

// 5. MAC orderings across theta, lambda_intra and lambda_inter sweeps.
Outcome mac_orderings() {
  Outcome o;
  const auto start = Clock::now();
  const ExperimentConfig cfg;
  const auto theta = run_sweep(cfg, "theta", {0.0, 0.9, 1.0});
  const auto intra = run_sweep(cfg, "lambda_intra", {0.0, 0.4, 1.0});
  const auto inter = run_sweep(cfg, "lambda_inter", {0.0, 0.6, 1.0});
  o.require(theta[0].macs_total < theta[1].macs_total, "theta 0 !< 0.9");
  o.require(theta[1].macs_total <= theta[2].macs_total, "theta 0.9 !<= 1");
  o.require(intra[0].macs_total > intra[1].macs_total && intra[1].macs_total > intra[2].macs_total,
            "lambda_intra not strictly decreasing");
  o.require(inter[0].macs_total > inter[1].macs_total && inter[1].macs_total > inter[2].macs_total,
            "lambda_inter not strictly decreasing");
  const double elapsed = seconds_since(start);
  o.require(elapsed < 10.0, "runtime " + std::to_string(elapsed) + " s");
  if (o.pass) {
    std::ostringstream os;
    os << "theta " << theta[0].macs_total << "<" << theta[1].macs_total << "<="
       << theta[2].macs_total << "; intra " << intra[0].macs_total << ">" << intra[1].macs_total
       << ">" << intra[2].macs_total << "; inter " << inter[0].macs_total << ">"
       << inter[1].macs_total << ">" << inter[2].macs_total << "; " << elapsed << " s";
    o.detail = os.str();
  }
  return o;
}

// 6. Single-branch per-step generative MACs after the gate.
Outcome batch_halving() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.coarse.enabled = false;
  cfg.fine.gate_step = 10;
  const RunReport report = execute(cfg);
  const PipelineConfig& pc = cfg.pipeline;
  std::uint64_t dual = 0;
  std::uint64_t attention = 0;
  for (int role = 2; role <= 4; ++role) {
    const oracle::BlockCost c = oracle::role_cost(pc, role);
    dual += 2 * c.full;
    attention += c.attention;
  }
  const std::uint64_t single = dual / 2 - attention;
  for (int step = 1; step <= 10; ++step) {
    o.require(report.ledger.step_total(step, true) == dual,
              "step " + std::to_string(step) + " not dual");
  }
  for (int step = 11; step <= 20; ++step) {
    o.require(report.ledger.step_total(step, true) == single,
              "step " + std::to_string(step) + ": " +
                  std::to_string(report.ledger.step_total(step, true)));
  }
  if (o.pass) o.detail = "steps 11-20 at " + std::to_string(single) + " MACs (dual " +
                         std::to_string(dual) + ")";
  return o;
}

// Checks every substitution and attention read of one run.
struct FidelityProbe : RunObserver {
  std::map<std::tuple<int, BlockRole, Branch>, Tensor> computed;
  std::map<std::tuple<int, BlockRole, Branch>, Tensor> attn;
  int gate = 0;
  int substitutions = 0;
  int fused_reads = 0;
  int control_reads = 0;
  std::optional<std::string> failure;

  void fail(const std::string& what) {
    if (!failure) failure = what;
  }

  void on_block(int step, BlockRole role, Branch branch, const Tensor& out, int source_step,
                Branch source_branch) override {
    if (source_step == step) {
      computed[{step, role, branch}] = out;
      return;
    }
    ++substitutions;
    const auto it = computed.find({source_step, role, source_branch});
    if (it == computed.end() || !bit_equal(it->second, out)) {
      fail("reuse at step " + std::to_string(step) + " role " + std::string(to_string(role)));
    }
  }

  void on_attention(int step, BlockRole role, Branch branch, const Tensor& a,
                    AttnOrigin origin) override {
    if (origin == AttnOrigin::kComputed) {
      attn[{step, role, branch}] = a;
      if (!is_control(role) && step > gate) fail("computed attention after the gate");
      return;
    }
    if (origin == AttnOrigin::kControlStepOne) {
      ++control_reads;
      const auto it = attn.find({1, role, Branch::kPrompt});
      if (it == attn.end() || !bit_equal(it->second, a)) fail("control map differs from step 1");
      return;
    }
    ++fused_reads;
    // Fused map from the latest computed pre-gate pair at this site.
    const Tensor* p = nullptr;
    const Tensor* n = nullptr;
    for (int s = gate; s >= 1 && !p; --s) {
      const auto ip = attn.find({s, role, Branch::kPrompt});
      const auto in = attn.find({s, role, Branch::kNull});
      if (ip != attn.end() && in != attn.end()) {
        p = &ip->second;
        n = &in->second;
      }
    }
    if (!p || !bit_equal(gate_fuse(*p, *n), a)) {
      fail("fused read at step " + std::to_string(step) + " differs from f_fuse");
    }
  }
};

// 7. Bit fidelity of reuse and fused attention over 20 seeds.
Outcome reuse_fidelity() {
  Outcome o;
  int subs = 0;
  int fused = 0;
  int ctrl = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ExperimentConfig cfg;
    cfg.pipeline.seed = seed;
    const Pipeline pl = init_pipeline(cfg.pipeline);
    const ResolvedPlan resolved = resolve_plan(cfg, pl);
    FidelityProbe probe;
    probe.gate = resolved.fine.effective_gate(cfg.pipeline.t_generative);
    run_denoise(pl, resolved.plan, resolved.fine, &probe);
    o.require(!probe.failure, "seed " + std::to_string(seed) + ": " + probe.failure.value_or(""));
    o.require(probe.substitutions > 0 && probe.fused_reads > 0 && probe.control_reads > 0,
              "seed " + std::to_string(seed) + " exercised nothing");
    subs += probe.substitutions;
    fused += probe.fused_reads;
    ctrl += probe.control_reads;
  }
  if (o.pass) {
    o.detail = std::to_string(subs) + " substitutions, " + std::to_string(fused) +
               " fused reads, " + std::to_string(ctrl) + " control reads bit-equal";
  }
  return o;
}

// 8. Default speedup above 1.8 and equal to the oracle ratio.
Outcome speedup_oracle() {
  Outcome o;
  const ExperimentConfig cfg;
  const Pipeline pl = init_pipeline(cfg.pipeline);
  const std::uint64_t hgc_macs = oracle_total(cfg, resolve_plan(cfg, pl));
  const ExperimentConfig base_cfg = nocache_config();
  const std::uint64_t base_macs = oracle_total(base_cfg, resolve_plan(base_cfg, pl));
  const RunReport report = execute(cfg);
  o.require(report.ledger.total() * base_macs == report.baseline_macs * hgc_macs,
            "measured ratio differs from the oracle ratio");
  o.require(report.speedup_macs ==
                static_cast<double>(base_macs) / static_cast<double>(hgc_macs),
            "speedup_macs differs from the oracle quotient");
  o.require(report.speedup_macs > 1.8, "speedup " + format_double(report.speedup_macs));
  if (o.pass) {
    const std::uint64_t g = std::gcd(base_macs, hgc_macs);
    o.detail = "speedup " + format_double(report.speedup_macs) + " = " +
               std::to_string(base_macs / g) + "/" + std::to_string(hgc_macs / g);
  }
  return o;
}

// 9. Byte-identical outputs from repeated commands.
Outcome determinism() {
  Outcome o;
  const ExperimentConfig cfg;
  const std::vector<std::pair<std::string, std::function<std::string(const fs::path&)>>> commands{
      {"run", [&](const fs::path& d) { return cmd_run(cfg, d); }},
      {"plan", [&](const fs::path& d) { return cmd_plan(cfg, d); }},
      {"calibrate", [&](const fs::path& d) { return cmd_calibrate(cfg, d); }},
      {"ablate", [&](const fs::path& d) { return cmd_ablate(cfg, "theta", {0.0, 0.9, 1.0}, d); }},
      {"window",
       [&](const fs::path& d) { return cmd_window(cfg, {{1, 10}, {11, 20}}, d); }},
  };
  int files = 0;
  for (const auto& [name, fn] : commands) {
    const fs::path a = scratch("c9_" + name + "_a");
    const fs::path b = scratch("c9_" + name + "_b");
    o.require(fn(a) == fn(b), name + " stdout differs");
    o.require(same_files(a, b, files), name + " files differ");
  }
  const fs::path run = scratch("c9_report");
  cmd_run(cfg, run);
  const fs::path ca = scratch("c9_compare_a");
  const fs::path cb = scratch("c9_compare_b");
  const std::string ta = cmd_compare(run / "report.json", run / "report.json", ca);
  const std::string tb = cmd_compare(run / "report.json", run / "report.json", cb);
  o.require(ta == tb, "compare stdout differs");
  o.require(same_files(ca, cb, files), "compare files differ");
  if (o.pass) o.detail = "6 commands, " + std::to_string(files) + " files byte-identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"no-cache identity", no_cache_identity},
      {"schedule oracle", schedule_oracle},
      {"tau_c oracle", tau_oracle},
      {"ledger closed form", ledger_closed_form},
      {"MAC orderings", mac_orderings},
      {"batch halving", batch_halving},
      {"reuse fidelity", reuse_fidelity},
      {"speedup", speedup_oracle},
      {"determinism", determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
