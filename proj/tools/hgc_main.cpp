// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line driver. Talks to the simulator exclusively through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hgc/hgc.h"

namespace {

struct SessionDeleter {
  void operator()(hgc_session* s) const { hgc_session_destroy(s); }
};
using Session = std::unique_ptr<hgc_session, SessionDeleter>;

struct Options {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  std::string seed;
};

int report(hgc_status status) {
  if (status != HGC_OK) std::cerr << "error: " << hgc_last_error() << "\n";
  return static_cast<int>(status);
}

// Prints and frees a string returned by the library.
int finish(hgc_status status, char* text) {
  if (status == HGC_OK && text) std::cout << text;
  hgc_string_free(text);
  return report(status);
}

int open_session(const Options& opt, Session& out) {
  std::string json;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read config '" << opt.config_path << "'\n";
      return HGC_ERR_IO;
    }
    json.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  hgc_session* raw = nullptr;
  if (hgc_status s = hgc_session_create(json.c_str(), &raw); s != HGC_OK) return report(s);
  out.reset(raw);
  for (const auto& assignment : opt.sets) {
    if (hgc_status s = hgc_session_set(raw, assignment.c_str()); s != HGC_OK) return report(s);
  }
  if (!opt.seed.empty()) {
    const std::string assignment = "pipeline.seed=" + opt.seed;
    if (hgc_status s = hgc_session_set(raw, assignment.c_str()); s != HGC_OK) return report(s);
  }
  return HGC_OK;
}

const char* out_arg(const Options& opt) { return opt.out_dir.empty() ? nullptr : opt.out_dir.c_str(); }

bool parse_window(const std::string& text, int& start, int& end) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return false;
  try {
    std::size_t used = 0;
    start = std::stoi(text.substr(0, colon), &used);
    if (used != colon) return false;
    const std::string rest = text.substr(colon + 1);
    end = std::stoi(rest, &used);
    return used == rest.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid-grained cache simulator for controllable denoising pipelines"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path, "JSON experiment config");
    cmd->add_option("--set", opt.sets, "Override a config field, e.g. coarse.theta=0.9")
        ->take_all();
    cmd->add_option("--out", opt.out_dir, "Output directory (default: config output_dir)");
    cmd->add_option("--seed", opt.seed, "Pipeline seed (unsigned 64-bit)");
  };

  auto* run = app.add_subcommand("run", "Run the configured experiment against the uncached reference");
  add_common(run);
  auto* plan = app.add_subcommand("plan", "Write plan.csv and print the step x role grid");
  add_common(plan);
  auto* calibrate = app.add_subcommand("calibrate", "Select tau_c from control-output similarity");
  add_common(calibrate);

  auto* ablate = app.add_subcommand("ablate", "Sweep one parameter, others fixed");
  add_common(ablate);
  std::string param;
  std::vector<double> values;
  ablate->add_option("--param", param, "theta | lambda_intra | lambda_inter | n_base | gate_step")
      ->required();
  ablate->add_option("--values", values, "Comma-separated values")->delimiter(',')->required();

  auto* window = app.add_subcommand("window", "Restrict control injection to step windows");
  add_common(window);
  std::vector<std::string> windows;
  window->add_option("--window", windows, "START:END (repeatable)");

  auto* compare = app.add_subcommand("compare", "Delta table between two report.json files");
  std::string report_a;
  std::string report_b;
  std::string compare_out;
  compare->add_option("report_a", report_a)->required();
  compare->add_option("report_b", report_b)->required();
  compare->add_option("--out", compare_out, "Directory for compare.csv (default: .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : HGC_ERR_VALIDATION;
  }

  if (compare->parsed()) {
    char* text = nullptr;
    const hgc_status s = hgc_cmd_compare(report_a.c_str(), report_b.c_str(),
                                         compare_out.empty() ? nullptr : compare_out.c_str(), &text);
    return finish(s, text);
  }

  Session session;
  if (int rc = open_session(opt, session); rc != HGC_OK) return rc;
  char* text = nullptr;

  hgc_status status = HGC_ERR_VALIDATION;
  if (run->parsed()) {
    status = hgc_cmd_run(session.get(), out_arg(opt), &text);
  } else if (plan->parsed()) {
    status = hgc_cmd_plan(session.get(), out_arg(opt), &text);
  } else if (calibrate->parsed()) {
    status = hgc_cmd_calibrate(session.get(), out_arg(opt), &text);
  } else if (ablate->parsed()) {
    status = hgc_cmd_ablate(session.get(), param.c_str(), values.data(), values.size(),
                            out_arg(opt), &text);
  }
  if (!window->parsed()) return finish(status, text);

  {
    std::vector<int> starts;
    std::vector<int> ends;
    for (const auto& w : windows) {
      int s = 0;
      int e = 0;
      if (!parse_window(w, s, e)) {
        std::cerr << "error: --window: expected START:END, got '" << w << "'\n";
        return HGC_ERR_VALIDATION;
      }
      starts.push_back(s);
      ends.push_back(e);
    }
    status = hgc_cmd_window(session.get(), starts.data(), ends.data(), starts.size(),
                            out_arg(opt), &text);
    return finish(status, text);
  }
}
