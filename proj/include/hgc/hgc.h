/* Copyright 2026 The HGCache Authors.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the hybrid-grained cache simulator. All objects are opaque
 * handles; every fallible call returns an hgc_status and leaves a message for
 * hgc_last_error(). Strings returned through char** belong to the caller and
 * are released with hgc_string_free().
 */
#ifndef HGC_HGC_H_
#define HGC_HGC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(HGC_BUILDING_LIBRARY)
#define HGC_API __declspec(dllexport)
#else
#define HGC_API __declspec(dllimport)
#endif
#else
#define HGC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum hgc_status {
  HGC_OK = 0,
  HGC_ERR_FAILURE = 1,
  HGC_ERR_VALIDATION = 2,
  HGC_ERR_PLAN_INTEGRITY = 3,
  HGC_ERR_IO = 4
} hgc_status;

typedef enum hgc_role {
  HGC_ROLE_CTRL_ENCODER = 0,
  HGC_ROLE_CTRL_MID = 1,
  HGC_ROLE_GEN_ENCODER = 2,
  HGC_ROLE_GEN_MID = 3,
  HGC_ROLE_GEN_DECODER = 4
} hgc_role;

typedef enum hgc_decision {
  HGC_DECISION_COMPUTE = 0,
  HGC_DECISION_REUSE = 1,
  HGC_DECISION_SKIP = 2
} hgc_decision;

typedef struct hgc_session hgc_session;
typedef struct hgc_plan hgc_plan;

typedef struct hgc_run_summary {
  uint64_t macs_total;
  uint64_t baseline_macs;
  double speedup_macs;
  double final_l2_rel;
  double final_cosine;
  int tau_c; /* 0 when the run used no control plan */
} hgc_run_summary;

HGC_API const char* hgc_version(void);

/* Message of the last failed call on this thread; "" if none. */
HGC_API const char* hgc_last_error(void);
HGC_API void hgc_string_free(char* s);

/* Sessions hold one experiment configuration. A NULL or empty config_json
 * selects the defaults. */
HGC_API hgc_status hgc_session_create(const char* config_json, hgc_session** out);
HGC_API void hgc_session_destroy(hgc_session* session);
/* "dotted.key=value"; value is parsed as JSON when possible. */
HGC_API hgc_status hgc_session_set(hgc_session* session, const char* assignment);
HGC_API hgc_status hgc_session_config_json(const hgc_session* session, char** out);
HGC_API hgc_status hgc_session_output_dir(const hgc_session* session, char** out);
HGC_API hgc_status hgc_session_execute(hgc_session* session, hgc_run_summary* out);
HGC_API hgc_status hgc_session_calibrate(hgc_session* session, int* tau_c_out);

/* Commands write their files under out_dir; text_out (optional) receives
 * what the CLI prints. */
HGC_API hgc_status hgc_cmd_run(hgc_session* session, const char* out_dir, char** text_out);
HGC_API hgc_status hgc_cmd_plan(hgc_session* session, const char* out_dir, char** text_out);
HGC_API hgc_status hgc_cmd_calibrate(hgc_session* session, const char* out_dir, char** text_out);
HGC_API hgc_status hgc_cmd_ablate(hgc_session* session, const char* param, const double* values,
                                  size_t count, const char* out_dir, char** text_out);
HGC_API hgc_status hgc_cmd_window(hgc_session* session, const int* starts, const int* ends,
                                  size_t count, const char* out_dir, char** text_out);
HGC_API hgc_status hgc_cmd_compare(const char* report_a, const char* report_b,
                                   const char* out_dir, char** text_out);

/* Cache plans. */
HGC_API hgc_status hgc_plan_control(int t_control, int tau_c, int latter_reuse, hgc_plan** out);
HGC_API hgc_status hgc_plan_generative(int t_generative, int n_base, double lambda_intra,
                                       double lambda_inter, hgc_plan** out);
HGC_API hgc_status hgc_plan_uniform(int t, int n, hgc_plan** out);
HGC_API hgc_status hgc_plan_from_session(hgc_session* session, hgc_plan** out);
HGC_API hgc_status hgc_plan_parse(const char* text, hgc_plan** out);
HGC_API void hgc_plan_destroy(hgc_plan* plan);
HGC_API int hgc_plan_horizon(const hgc_plan* plan);
HGC_API hgc_status hgc_plan_decision(const hgc_plan* plan, int step, int role, int* kind,
                                     int* source);
HGC_API hgc_status hgc_plan_serialize(const hgc_plan* plan, char** out);

HGC_API hgc_status hgc_effective_interval(int n_base, double lambda, int* out);
/* `entries` holds a(i, j) for 1 <= i < j <= half in row-major order:
 * (1,2), (1,3), ..., (1,half), (2,3), ... */
HGC_API hgc_status hgc_select_tau_c(const double* entries, int half, double theta, int* out);

#ifdef __cplusplus
}
#endif

#endif /* HGC_HGC_H_ */
