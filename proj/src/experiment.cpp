// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hgc/experiment.hpp"

#include <future>
#include <set>
#include <sstream>
#include <type_traits>

#include "hgc/denoise.hpp"
#include "hgc/error.hpp"

namespace hgc {

using nlohmann::json;

namespace {

std::string mode_name(RunMode m) {
  switch (m) {
    case RunMode::kNoCache:
      return "nocache";
    case RunMode::kUniform:
      return "uniform";
    case RunMode::kHgc:
      return "hgc";
  }
  return "?";
}

}  // namespace

void ExperimentConfig::validate() const {
  pipeline.validate("pipeline");
  coarse.validate("coarse");
  fine.validate(pipeline.t_generative, "fine");
  if (uniform_interval < 1) throw ValidationError("uniform_interval: must be a positive integer");
  if (tau_c_mode == TauCMode::kFixed) {
    const int half = pipeline.t_control / 2;
    if (tau_c < 1 || tau_c > half) {
      throw ValidationError("tau_c: must be in [1, " + std::to_string(half) + "], got " +
                            std::to_string(tau_c));
    }
  }
  if (condition_window) {
    const auto [s, e] = *condition_window;
    if (s < 1 || s > e || e > pipeline.t_generative) {
      throw ValidationError("condition_window: need 1 <= start <= end <= " +
                            std::to_string(pipeline.t_generative));
    }
  }
  if (output_dir.empty()) throw ValidationError("output_dir: must not be empty");
}

json to_json(const ExperimentConfig& c) {
  const auto& p = c.pipeline;
  json j;
  j["pipeline"] = {{"t_control", p.t_control},
                   {"t_generative", p.t_generative},
                   {"d_model", p.d_model},
                   {"latent_tokens", p.latent_tokens},
                   {"prompt_tokens", p.prompt_tokens},
                   {"d_prompt", p.d_prompt},
                   {"guidance_scale", p.guidance_scale},
                   {"step_size", p.step_size ? json(*p.step_size) : json(nullptr)},
                   {"seed", p.seed}};
  j["coarse"] = {{"enabled", c.coarse.enabled},
                 {"theta", c.coarse.theta},
                 {"n_base", c.coarse.n_base},
                 {"lambda_intra", c.coarse.lambda_intra},
                 {"lambda_inter", c.coarse.lambda_inter}};
  j["fine"] = {{"enabled_control", c.fine.enabled_control},
               {"enabled_generative", c.fine.enabled_generative},
               {"gate_step", c.fine.gate_step ? json(*c.fine.gate_step) : json(nullptr)}};
  j["mode"] = mode_name(c.mode);
  j["uniform_interval"] = c.uniform_interval;
  j["control_latter"] = c.control_latter == ControlLatter::kSkip ? "skip" : "reuse";
  j["tau_c_mode"] = c.tau_c_mode == TauCMode::kFixed ? "fixed" : "calibrate";
  j["tau_c"] = c.tau_c;
  j["condition_window"] = c.condition_window
                              ? json::array({c.condition_window->start, c.condition_window->end})
                              : json(nullptr);
  j["output_dir"] = c.output_dir;
  return j;
}

namespace {

// Typed accessors over one JSON object; every key read is remembered so
// leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_.empty() ? "config" : path_, "must be an object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void read(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(field(key), "must be a boolean");
      out = v->get<bool>();
    }
  }
  void read(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(field(key), "must be a number");
      out = v->get<double>();
    }
  }
  void read(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(field(key), "must be an integer");
      out = v->get<int>();
    }
  }
  template <typename T>
    requires std::is_unsigned_v<T>
  void read(const std::string& key, T& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(field(key), "must be a non-negative integer");
      out = v->get<T>();
    }
  }
  void read(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(field(key), "must be a string");
      out = v->get<std::string>();
    }
  }
  template <typename T>
  void read(const std::string& key, std::optional<T>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
        return;
      }
      T value{};
      const json wrapped = json::object({{key, *v}});
      ObjectReader sub(wrapped, path_);
      sub.read(key, value);
      out = value;
    }
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) fail(field(it.key()), "unknown field");
    }
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  [[noreturn]] static void fail(const std::string& field, const std::string& what) {
    throw ValidationError(field + ": " + what);
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  ExperimentConfig c;
  ObjectReader top(doc, "");
  if (const json* p = top.find("pipeline")) {
    ObjectReader r(*p, "pipeline");
    r.read("t_control", c.pipeline.t_control);
    r.read("t_generative", c.pipeline.t_generative);
    r.read("d_model", c.pipeline.d_model);
    r.read("latent_tokens", c.pipeline.latent_tokens);
    r.read("prompt_tokens", c.pipeline.prompt_tokens);
    r.read("d_prompt", c.pipeline.d_prompt);
    r.read("guidance_scale", c.pipeline.guidance_scale);
    r.read("step_size", c.pipeline.step_size);
    r.read("seed", c.pipeline.seed);
    r.finish();
  }
  if (const json* p = top.find("coarse")) {
    ObjectReader r(*p, "coarse");
    r.read("enabled", c.coarse.enabled);
    r.read("theta", c.coarse.theta);
    r.read("n_base", c.coarse.n_base);
    r.read("lambda_intra", c.coarse.lambda_intra);
    r.read("lambda_inter", c.coarse.lambda_inter);
    r.finish();
  }
  if (const json* p = top.find("fine")) {
    ObjectReader r(*p, "fine");
    r.read("enabled_control", c.fine.enabled_control);
    r.read("enabled_generative", c.fine.enabled_generative);
    r.read("gate_step", c.fine.gate_step);
    r.finish();
  }
  std::string s;
  if (top.find("mode")) {
    s = mode_name(c.mode);
    top.read("mode", s);
    if (s == "nocache") {
      c.mode = RunMode::kNoCache;
    } else if (s == "uniform") {
      c.mode = RunMode::kUniform;
    } else if (s == "hgc") {
      c.mode = RunMode::kHgc;
    } else {
      ObjectReader::fail("mode", "must be one of nocache, uniform, hgc");
    }
  }
  top.read("uniform_interval", c.uniform_interval);
  if (top.find("control_latter")) {
    s = "skip";
    top.read("control_latter", s);
    if (s != "skip" && s != "reuse") ObjectReader::fail("control_latter", "must be skip or reuse");
    c.control_latter = s == "skip" ? ControlLatter::kSkip : ControlLatter::kReuse;
  }
  if (top.find("tau_c_mode")) {
    s = "fixed";
    top.read("tau_c_mode", s);
    if (s != "fixed" && s != "calibrate") {
      ObjectReader::fail("tau_c_mode", "must be fixed or calibrate");
    }
    c.tau_c_mode = s == "fixed" ? TauCMode::kFixed : TauCMode::kCalibrate;
  }
  top.read("tau_c", c.tau_c);
  if (const json* w = top.find("condition_window")) {
    if (w->is_null()) {
      c.condition_window.reset();
    } else {
      if (!w->is_array() || w->size() != 2 || !(*w)[0].is_number_integer() ||
          !(*w)[1].is_number_integer()) {
        ObjectReader::fail("condition_window", "must be null or [start, end]");
      }
      c.condition_window = ConditionWindow{(*w)[0].get<int>(), (*w)[1].get<int>()};
    }
  }
  top.read("output_dir", c.output_dir);
  top.finish();
  c.validate();
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError("--set: expected KEY=VALUE, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json doc = to_json(cfg);
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (!node->is_object() || !node->contains(part)) {
      throw ValidationError(key + ": unknown field");
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
  cfg = config_from_json(doc);
}

ResolvedPlan resolve_plan(const ExperimentConfig& cfg, const Pipeline& pipeline) {
  const int steps = cfg.pipeline.t_generative;
  ResolvedPlan r{all_compute_plan(steps), FineCacheConfig::disabled(), std::nullopt};
  switch (cfg.mode) {
    case RunMode::kNoCache:
      break;
    case RunMode::kUniform:
      r.plan = build_uniform_plan(steps, cfg.uniform_interval);
      break;
    case RunMode::kHgc:
      r.fine = cfg.fine;
      if (cfg.coarse.enabled) {
        const int tau = cfg.tau_c_mode == TauCMode::kFixed
                            ? cfg.tau_c
                            : calibrate(pipeline, cfg.coarse.theta);
        r.tau_c = tau;
        r.plan = merge_plans(
            build_control_plan(cfg.pipeline.t_control, tau,
                               cfg.control_latter == ControlLatter::kReuse),
            build_generative_plan(steps, cfg.coarse));
      }
      break;
  }
  if (cfg.condition_window) {
    for (int step = 1; step <= steps; ++step) {
      if (step < cfg.condition_window->start || step > cfg.condition_window->end) {
        for (BlockRole role : kControlRoles) r.plan.set(step, role, Decision::skip());
      }
    }
  }
  validate_plan(r.plan);
  return r;
}

namespace {

json resolved_json(const ExperimentConfig& cfg) {
  return {{"step_size", cfg.pipeline.effective_step_size()},
          {"gate_step", cfg.fine.effective_gate(cfg.pipeline.t_generative)}};
}

}  // namespace

RunReport execute(const ExperimentConfig& cfg) {
  cfg.validate();
  const Pipeline pipeline = init_pipeline(cfg.pipeline);
  const ResolvedPlan resolved = resolve_plan(cfg, pipeline);
  const int steps = cfg.pipeline.t_generative;

  const DenoiseResult baseline =
      run_denoise(pipeline, all_compute_plan(steps), FineCacheConfig::disabled());
  const DenoiseResult cached = run_denoise(pipeline, resolved.plan, resolved.fine);

  RunReport report;
  report.config = to_json(cfg);
  report.config["resolved"] = resolved_json(cfg);
  report.plan_digest = plan_digest(resolved.plan);
  report.tau_c = resolved.tau_c;
  report.ledger = MacLedger(cached.counter, steps);
  const MacLedger base_ledger(baseline.counter, steps);
  report.baseline_macs = base_ledger.total();
  report.drift = drift(baseline.trajectory, cached.trajectory);
  report.speedup_macs = speedup(base_ledger, report.ledger);
  return report;
}

std::string cmd_run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  const RunReport report = execute(cfg);
  emit_csv(report, out_dir);
  emit_report_json(report, out_dir);
  std::ostringstream os;
  os << "mode          " << mode_name(cfg.mode) << "\n";
  if (report.tau_c) os << "tau_c         " << *report.tau_c << "\n";
  os << "plan          " << report.plan_digest << "\n"
     << "macs          " << report.ledger.total() << "\n"
     << "baseline_macs " << report.baseline_macs << "\n"
     << "speedup_macs  " << format_double(report.speedup_macs) << "\n"
     << "final_l2_rel  " << format_double(report.drift.final_l2_rel) << "\n"
     << "final_cosine  " << format_double(report.drift.final_cosine) << "\n";
  return os.str();
}

std::string cmd_plan(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  const Pipeline pipeline = init_pipeline(cfg.pipeline);
  const ResolvedPlan resolved = resolve_plan(cfg, pipeline);
  write_text_file(out_dir / "plan.csv", serialize_plan(resolved.plan));
  std::string text;
  if (resolved.tau_c) text += "tau_c " + std::to_string(*resolved.tau_c) + "\n";
  return text + format_plan_grid(resolved.plan);
}

std::string cmd_calibrate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  const Pipeline pipeline = init_pipeline(cfg.pipeline);
  SimilarityMatrix sim;
  const int tau = calibrate(pipeline, cfg.coarse.theta, &sim);

  std::string csv = "i,j,a_ij\n";
  for (int i = 1; i <= sim.half(); ++i) {
    for (int j = i + 1; j <= sim.half(); ++j) {
      csv += std::to_string(i) + "," + std::to_string(j) + "," + format_double(sim.at(i, j)) + "\n";
    }
  }
  write_text_file(out_dir / "similarity.csv", csv);
  write_text_file(out_dir / "tau_c.json",
                  json{{"theta", cfg.coarse.theta}, {"tau_c", tau}, {"half", sim.half()}}.dump(2) +
                      "\n");
  ExperimentConfig fixed = cfg;
  fixed.tau_c_mode = TauCMode::kFixed;
  fixed.tau_c = tau;
  write_text_file(out_dir / "calibrated_config.json", to_json(fixed).dump(2) + "\n");
  return "theta " + format_double(cfg.coarse.theta) + "\ntau_c " + std::to_string(tau) + "\n";
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, const std::string& param,
                                  const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("ablate: value list is empty");
  std::vector<ExperimentConfig> points;
  for (double v : values) {
    ExperimentConfig c = cfg;
    auto as_int = [&](const char* name) {
      if (v != static_cast<double>(static_cast<int>(v))) {
        throw ValidationError(std::string(name) + ": ablation value must be an integer");
      }
      return static_cast<int>(v);
    };
    if (param == "theta") {
      c.coarse.theta = v;
      c.tau_c_mode = TauCMode::kCalibrate;
    } else if (param == "lambda_intra") {
      c.coarse.lambda_intra = v;
    } else if (param == "lambda_inter") {
      c.coarse.lambda_inter = v;
    } else if (param == "n_base") {
      c.coarse.n_base = as_int("coarse.n_base");
    } else if (param == "gate_step") {
      c.fine.gate_step = as_int("fine.gate_step");
    } else {
      throw ValidationError("ablate: unknown parameter '" + param +
                            "' (expected theta, lambda_intra, lambda_inter, n_base, gate_step)");
    }
    c.validate();
    points.push_back(std::move(c));
  }
  // Points are independent; results are collected in input order.
  std::vector<std::future<RunReport>> futures;
  for (const auto& c : points) futures.push_back(std::async(std::launch::async, execute, c));
  std::vector<SweepPoint> out;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    const RunReport r = futures[i].get();
    out.push_back({param, values[i], r.ledger.total(), r.drift.final_l2_rel,
                   r.drift.final_cosine, r.speedup_macs});
  }
  return out;
}

std::string cmd_ablate(const ExperimentConfig& cfg, const std::string& param,
                       const std::vector<double>& values, const std::filesystem::path& out_dir) {
  const auto points = run_sweep(cfg, param, values);
  emit_plot_data(points, out_dir / "sweep.csv");
  return plot_data_csv(points);
}

std::vector<WindowResult> run_windows(const ExperimentConfig& cfg,
                                      const std::vector<ConditionWindow>& windows) {
  if (windows.empty()) throw ValidationError("window: at least one window is required");
  ExperimentConfig base = cfg;
  base.mode = RunMode::kNoCache;
  base.condition_window.reset();
  base.validate();
  for (const auto& w : windows) {
    ExperimentConfig c = base;
    c.condition_window = w;
    c.validate();
  }
  const Pipeline pipeline = init_pipeline(base.pipeline);
  const DenoiseResult all_steps =
      run_denoise(pipeline, resolve_plan(base, pipeline).plan, FineCacheConfig::disabled());
  std::vector<WindowResult> out;
  for (const auto& w : windows) {
    ExperimentConfig c = base;
    c.condition_window = w;
    const DenoiseResult r =
        run_denoise(pipeline, resolve_plan(c, pipeline).plan, FineCacheConfig::disabled());
    const DriftReport d = drift(all_steps.trajectory, r.trajectory);
    out.push_back({w, d.final_l2_rel, d.final_cosine, r.counter.total()});
  }
  return out;
}

std::string cmd_window(const ExperimentConfig& cfg, const std::vector<ConditionWindow>& windows,
                       const std::filesystem::path& out_dir) {
  const auto results = run_windows(cfg, windows);
  std::string csv = "start,end,final_l2_rel,final_cosine,macs_total\n";
  for (const auto& r : results) {
    csv += std::to_string(r.window.start) + "," + std::to_string(r.window.end) + "," +
           format_double(r.final_l2_rel) + "," + format_double(r.final_cosine) + "," +
           std::to_string(r.macs_total) + "\n";
  }
  write_text_file(out_dir / "window.csv", csv);
  return csv;
}

std::string cmd_compare(const std::filesystem::path& report_a,
                        const std::filesystem::path& report_b,
                        const std::filesystem::path& out_dir) {
  auto load = [](const std::filesystem::path& p) {
    json doc = json::parse(read_text_file(p), nullptr, false);
    if (doc.is_discarded()) throw ValidationError("compare: '" + p.string() + "' is not JSON");
    return doc;
  };
  const auto rows = compare_reports(load(report_a), load(report_b));
  write_text_file(out_dir / "compare.csv", compare_csv(rows));
  return format_compare_table(rows);
}

}  // namespace hgc
