// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hgc/cache_plan.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "hgc/error.hpp"

namespace hgc {

CachePlan::CachePlan(int horizon) : horizon_(horizon) {
  if (horizon < 1) throw PlanIntegrityError("plan: horizon must be positive");
  decisions_.assign(static_cast<std::size_t>(horizon) * kNumRoles, Decision::compute());
}

std::size_t CachePlan::slot(int step, BlockRole role) const {
  if (step < 1 || step > horizon_) {
    throw PlanIntegrityError("plan: step " + std::to_string(step) + " outside [1, " +
                             std::to_string(horizon_) + "]");
  }
  return static_cast<std::size_t>(step - 1) * kNumRoles + index_of(role);
}

const Decision& CachePlan::at(int step, BlockRole role) const {
  return decisions_[slot(step, role)];
}

void CachePlan::set(int step, BlockRole role, Decision d) { decisions_[slot(step, role)] = d; }

void validate_plan(const CachePlan& plan) {
  auto fail = [](int step, BlockRole role, const std::string& what) {
    throw PlanIntegrityError("plan: step " + std::to_string(step) + " role " +
                             std::string(to_string(role)) + ": " + what);
  };
  for (int step = 1; step <= plan.horizon(); ++step) {
    for (BlockRole role : kAllRoles) {
      const Decision& d = plan.at(step, role);
      switch (d.kind) {
        case DecisionKind::kCompute:
          break;
        case DecisionKind::kSkip:
          if (!is_control(role)) fail(step, role, "skip is only allowed on control roles");
          break;
        case DecisionKind::kReuse:
          if (d.source < 1 || d.source >= step) {
            fail(step, role, "reuse source " + std::to_string(d.source) + " is not an earlier step");
          }
          if (plan.at(d.source, role).kind != DecisionKind::kCompute) {
            fail(step, role, "reuse source " + std::to_string(d.source) + " is not computed");
          }
          break;
      }
    }
    const bool enc_skip = plan.at(step, BlockRole::kCtrlEncoder).kind == DecisionKind::kSkip;
    const bool mid_skip = plan.at(step, BlockRole::kCtrlMid).kind == DecisionKind::kSkip;
    if (enc_skip != mid_skip) fail(step, BlockRole::kCtrlMid, "control roles disagree on skip");
  }
  for (BlockRole role : kAllRoles) {
    if (plan.at(1, role).kind == DecisionKind::kReuse) fail(1, role, "step 1 must be computed");
  }
}

CachePlan merge_plans(const CachePlan& control, const CachePlan& generative) {
  if (control.horizon() != generative.horizon()) {
    throw PlanIntegrityError("plan: control and generative horizons differ");
  }
  CachePlan out(control.horizon());
  for (int step = 1; step <= out.horizon(); ++step) {
    for (BlockRole role : kControlRoles) out.set(step, role, control.at(step, role));
    for (BlockRole role : kGenerativeRoles) out.set(step, role, generative.at(step, role));
  }
  return out;
}

std::string symbol(const Decision& d) {
  switch (d.kind) {
    case DecisionKind::kCompute:
      return "C";
    case DecisionKind::kReuse:
      return "R(" + std::to_string(d.source) + ")";
    case DecisionKind::kSkip:
      return "S";
  }
  return "?";
}

namespace {

std::string_view kind_name(DecisionKind k) {
  switch (k) {
    case DecisionKind::kCompute:
      return "compute";
    case DecisionKind::kReuse:
      return "reuse";
    case DecisionKind::kSkip:
      return "skip";
  }
  return "?";
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int(const std::string& s, int line_no) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ValidationError("plan line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  }
  return v;
}

constexpr const char* kPlanHeader = "step,role,decision,source";

}  // namespace

std::string serialize_plan(const CachePlan& plan) {
  std::string out = std::string(kPlanHeader) + "\n";
  for (int step = 1; step <= plan.horizon(); ++step) {
    for (BlockRole role : kAllRoles) {
      const Decision& d = plan.at(step, role);
      out += std::to_string(step) + "," + std::string(to_string(role)) + "," +
             std::string(kind_name(d.kind)) + ",";
      if (d.kind == DecisionKind::kReuse) out += std::to_string(d.source);
      out += "\n";
    }
  }
  return out;
}

CachePlan parse_plan(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kPlanHeader) {
    throw ValidationError("plan: missing header '" + std::string(kPlanHeader) + "'");
  }
  struct Row {
    int step;
    BlockRole role;
    Decision d;
  };
  std::vector<Row> rows;
  int line_no = 1;
  int horizon = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 4) {
      throw ValidationError("plan line " + std::to_string(line_no) + ": expected 4 fields");
    }
    Row r{};
    r.step = parse_int(f[0], line_no);
    auto role = parse_role(f[1]);
    if (!role) throw ValidationError("plan line " + std::to_string(line_no) + ": bad role");
    r.role = *role;
    if (f[2] == "compute") {
      r.d = Decision::compute();
    } else if (f[2] == "skip") {
      r.d = Decision::skip();
    } else if (f[2] == "reuse") {
      r.d = Decision::reuse(parse_int(f[3], line_no));
    } else {
      throw ValidationError("plan line " + std::to_string(line_no) + ": bad decision '" + f[2] +
                            "'");
    }
    horizon = std::max(horizon, r.step);
    rows.push_back(r);
  }
  if (rows.size() != static_cast<std::size_t>(horizon) * kNumRoles) {
    throw ValidationError("plan: expected one record per (step, role)");
  }
  CachePlan plan(horizon);
  for (const Row& r : rows) plan.set(r.step, r.role, r.d);
  return plan;
}

std::string format_plan_grid(const CachePlan& plan) {
  constexpr int kWidth = 14;
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  std::string out = pad("step", 6);
  for (BlockRole role : kAllRoles) out += pad(std::string(to_string(role)), kWidth);
  out += "\n";
  for (int step = 1; step <= plan.horizon(); ++step) {
    out += pad(std::to_string(step), 6);
    for (BlockRole role : kAllRoles) out += pad(symbol(plan.at(step, role)), kWidth);
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
  }
  return out;
}

std::string plan_digest(const CachePlan& plan) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_plan(plan)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

}  // namespace hgc
