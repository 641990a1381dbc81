// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hgc/hgc.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "hgc/coarse_cache.hpp"
#include "hgc/error.hpp"
#include "hgc/experiment.hpp"

struct hgc_session {
  hgc::ExperimentConfig config;
};

struct hgc_plan {
  hgc::CachePlan plan;
};

namespace {

thread_local std::string g_last_error;

hgc_status fail(hgc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
hgc_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return HGC_OK;
  } catch (const hgc::PlanIntegrityError& e) {
    return fail(HGC_ERR_PLAN_INTEGRITY, e.what());
  } catch (const hgc::CacheOrderError& e) {
    return fail(HGC_ERR_PLAN_INTEGRITY, e.what());
  } catch (const hgc::ValidationError& e) {
    return fail(HGC_ERR_VALIDATION, e.what());
  } catch (const hgc::IoError& e) {
    return fail(HGC_ERR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(HGC_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(HGC_ERR_FAILURE, e.what());
  } catch (...) {
    return fail(HGC_ERR_FAILURE, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit_text(char** text_out, const std::string& text) {
  if (text_out) *text_out = dup_string(text);
}

void require(bool ok, const char* what) {
  if (!ok) throw hgc::ValidationError(what);
}

std::filesystem::path out_path(const hgc_session* s, const char* out_dir) {
  return out_dir && *out_dir ? std::filesystem::path(out_dir)
                             : std::filesystem::path(s->config.output_dir);
}

hgc_status make_plan(hgc_plan** out, hgc::CachePlan plan) {
  *out = new hgc_plan{std::move(plan)};
  return HGC_OK;
}

}  // namespace

extern "C" {

const char* hgc_version(void) { return "1.0.0"; }

const char* hgc_last_error(void) { return g_last_error.c_str(); }

void hgc_string_free(char* s) { std::free(s); }

hgc_status hgc_session_create(const char* config_json, hgc_session** out) {
  return guarded([&] {
    require(out != nullptr, "session: null output pointer");
    hgc::ExperimentConfig cfg;
    if (config_json && *config_json) cfg = hgc::parse_config(config_json);
    *out = new hgc_session{std::move(cfg)};
  });
}

void hgc_session_destroy(hgc_session* session) { delete session; }

hgc_status hgc_session_set(hgc_session* session, const char* assignment) {
  return guarded([&] {
    require(session && assignment, "session_set: null argument");
    hgc::apply_override(session->config, assignment);
  });
}

hgc_status hgc_session_config_json(const hgc_session* session, char** out) {
  return guarded([&] {
    require(session && out, "session_config_json: null argument");
    *out = dup_string(hgc::to_json(session->config).dump(2));
  });
}

hgc_status hgc_session_output_dir(const hgc_session* session, char** out) {
  return guarded([&] {
    require(session && out, "session_output_dir: null argument");
    *out = dup_string(session->config.output_dir);
  });
}

hgc_status hgc_session_execute(hgc_session* session, hgc_run_summary* out) {
  return guarded([&] {
    require(session && out, "session_execute: null argument");
    const hgc::RunReport r = hgc::execute(session->config);
    out->macs_total = r.ledger.total();
    out->baseline_macs = r.baseline_macs;
    out->speedup_macs = r.speedup_macs;
    out->final_l2_rel = r.drift.final_l2_rel;
    out->final_cosine = r.drift.final_cosine;
    out->tau_c = r.tau_c.value_or(0);
  });
}

hgc_status hgc_session_calibrate(hgc_session* session, int* tau_c_out) {
  return guarded([&] {
    require(session && tau_c_out, "session_calibrate: null argument");
    session->config.validate();
    *tau_c_out = hgc::calibrate(hgc::init_pipeline(session->config.pipeline),
                                session->config.coarse.theta);
  });
}

hgc_status hgc_cmd_run(hgc_session* session, const char* out_dir, char** text_out) {
  return guarded([&] {
    require(session != nullptr, "run: null session");
    emit_text(text_out, hgc::cmd_run(session->config, out_path(session, out_dir)));
  });
}

hgc_status hgc_cmd_plan(hgc_session* session, const char* out_dir, char** text_out) {
  return guarded([&] {
    require(session != nullptr, "plan: null session");
    emit_text(text_out, hgc::cmd_plan(session->config, out_path(session, out_dir)));
  });
}

hgc_status hgc_cmd_calibrate(hgc_session* session, const char* out_dir, char** text_out) {
  return guarded([&] {
    require(session != nullptr, "calibrate: null session");
    emit_text(text_out, hgc::cmd_calibrate(session->config, out_path(session, out_dir)));
  });
}

hgc_status hgc_cmd_ablate(hgc_session* session, const char* param, const double* values,
                          size_t count, const char* out_dir, char** text_out) {
  return guarded([&] {
    require(session && param, "ablate: null argument");
    require(values != nullptr || count == 0, "ablate: null value array");
    const std::vector<double> v(values, values + count);
    emit_text(text_out, hgc::cmd_ablate(session->config, param, v, out_path(session, out_dir)));
  });
}

hgc_status hgc_cmd_window(hgc_session* session, const int* starts, const int* ends, size_t count,
                          const char* out_dir, char** text_out) {
  return guarded([&] {
    require(session != nullptr, "window: null session");
    require((starts && ends) || count == 0, "window: null window arrays");
    std::vector<hgc::ConditionWindow> windows;
    for (size_t i = 0; i < count; ++i) windows.push_back({starts[i], ends[i]});
    emit_text(text_out, hgc::cmd_window(session->config, windows, out_path(session, out_dir)));
  });
}

hgc_status hgc_cmd_compare(const char* report_a, const char* report_b, const char* out_dir,
                           char** text_out) {
  return guarded([&] {
    require(report_a && report_b, "compare: null report path");
    const std::filesystem::path dir = out_dir && *out_dir ? out_dir : ".";
    emit_text(text_out, hgc::cmd_compare(report_a, report_b, dir));
  });
}

hgc_status hgc_plan_control(int t_control, int tau_c, int latter_reuse, hgc_plan** out) {
  return guarded([&] {
    require(out != nullptr, "plan: null output pointer");
    make_plan(out, hgc::build_control_plan(t_control, tau_c, latter_reuse != 0));
  });
}

hgc_status hgc_plan_generative(int t_generative, int n_base, double lambda_intra,
                               double lambda_inter, hgc_plan** out) {
  return guarded([&] {
    require(out != nullptr, "plan: null output pointer");
    hgc::CoarseCacheConfig cfg;
    cfg.n_base = n_base;
    cfg.lambda_intra = lambda_intra;
    cfg.lambda_inter = lambda_inter;
    make_plan(out, hgc::build_generative_plan(t_generative, cfg));
  });
}

hgc_status hgc_plan_uniform(int t, int n, hgc_plan** out) {
  return guarded([&] {
    require(out != nullptr, "plan: null output pointer");
    make_plan(out, hgc::build_uniform_plan(t, n));
  });
}

hgc_status hgc_plan_from_session(hgc_session* session, hgc_plan** out) {
  return guarded([&] {
    require(session && out, "plan: null argument");
    session->config.validate();
    const hgc::Pipeline pl = hgc::init_pipeline(session->config.pipeline);
    make_plan(out, hgc::resolve_plan(session->config, pl).plan);
  });
}

hgc_status hgc_plan_parse(const char* text, hgc_plan** out) {
  return guarded([&] {
    require(text && out, "plan: null argument");
    hgc::CachePlan plan = hgc::parse_plan(text);
    hgc::validate_plan(plan);
    make_plan(out, std::move(plan));
  });
}

void hgc_plan_destroy(hgc_plan* plan) { delete plan; }

int hgc_plan_horizon(const hgc_plan* plan) { return plan ? plan->plan.horizon() : 0; }

hgc_status hgc_plan_decision(const hgc_plan* plan, int step, int role, int* kind, int* source) {
  return guarded([&] {
    require(plan && kind && source, "plan_decision: null argument");
    require(role >= 0 && role < static_cast<int>(hgc::kNumRoles), "plan_decision: bad role");
    const hgc::Decision& d = plan->plan.at(step, static_cast<hgc::BlockRole>(role));
    *kind = static_cast<int>(d.kind);
    *source = d.source;
  });
}

hgc_status hgc_plan_serialize(const hgc_plan* plan, char** out) {
  return guarded([&] {
    require(plan && out, "plan_serialize: null argument");
    *out = dup_string(hgc::serialize_plan(plan->plan));
  });
}

hgc_status hgc_effective_interval(int n_base, double lambda, int* out) {
  return guarded([&] {
    require(out != nullptr, "effective_interval: null output pointer");
    *out = hgc::effective_interval(n_base, lambda);
  });
}

hgc_status hgc_select_tau_c(const double* entries, int half, double theta, int* out) {
  return guarded([&] {
    require(out != nullptr, "select_tau_c: null output pointer");
    require(half >= 0, "select_tau_c: negative size");
    require(entries != nullptr || half < 2, "select_tau_c: null entries");
    hgc::SimilarityMatrix sim(half);
    std::size_t k = 0;
    for (int i = 1; i <= half; ++i) {
      for (int j = i + 1; j <= half; ++j) sim.set(i, j, entries[k++]);
    }
    *out = hgc::select_tau_c(sim, theta);
  });
}

}  // extern "C"
