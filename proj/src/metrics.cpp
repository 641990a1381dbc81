// Copyright 2026 The HGCache Authors.
// SPDX-License-Identifier: Apache-2.0

#include "hgc/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "hgc/error.hpp"

namespace hgc {

MacLedger::MacLedger(const MacCounter& counter, int t_generative) {
  const int boundary = std::max(t_generative / 2, 1);
  entries_.reserve(counter.entries().size());
  for (const auto& [tag, macs] : counter.entries()) {
    entries_.push_back({tag.step, tag.role, tag.branch, macs});
    total_ += macs;
    (is_control(tag.role) ? control_ : generative_) += macs;
    (tag.step < boundary ? former_ : latter_) += macs;
  }
}

std::uint64_t MacLedger::step_total(int step, bool generative) const {
  std::uint64_t sum = 0;
  for (const auto& e : entries_) {
    if (e.step == step && is_control(e.role) != generative) sum += e.macs;
  }
  return sum;
}

DriftReport drift(const std::vector<LatentState>& a, const std::vector<LatentState>& b) {
  if (a.size() != b.size()) {
    throw ValidationError("drift: trajectory lengths differ (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  }
  DriftReport report;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Tensor& x = a[i].x;
    const Tensor& y = b[i].x;
    if (x.shape() != y.shape()) throw ShapeError("drift: latent shapes differ at step " + std::to_string(i + 1));
    const double na = norm(x);
    const double nb = norm(y);
    DriftPoint p;
    p.step = a[i].step;
    p.l2_rel = norm(sub(x, y)) / std::max(na, kDriftEpsilon);
    if (na == 0.0 && nb == 0.0) {
      p.cosine = 1.0;
    } else if (na == 0.0 || nb == 0.0) {
      p.cosine = 0.0;
    } else {
      p.cosine = cosine_flat(x, y);
    }
    report.per_step.push_back(p);
  }
  if (!report.per_step.empty()) {
    report.final_l2_rel = report.per_step.back().l2_rel;
    report.final_cosine = report.per_step.back().cosine;
  }
  return report;
}

double speedup(const MacLedger& base, const MacLedger& cached) {
  if (base.total() == 0 || cached.total() == 0) {
    throw ValidationError("speedup: MAC totals must be positive");
  }
  return static_cast<double>(base.total()) / static_cast<double>(cached.total());
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.ledger.entries()) {
    entries.push_back({{"step", e.step},
                       {"role", std::string(to_string(e.role))},
                       {"branch", std::string(to_string(e.branch))},
                       {"macs", e.macs}});
  }
  nlohmann::json per_step = nlohmann::json::array();
  for (const auto& p : r.drift.per_step) {
    per_step.push_back({{"step", p.step}, {"l2_rel", p.l2_rel}, {"cosine", p.cosine}});
  }
  nlohmann::json j;
  j["config"] = r.config;
  j["plan_digest"] = r.plan_digest;
  j["tau_c"] = r.tau_c ? nlohmann::json(*r.tau_c) : nlohmann::json(nullptr);
  j["ledger"] = {{"total", r.ledger.total()},
                 {"by_module",
                  {{"control", r.ledger.control_total()},
                   {"generative", r.ledger.generative_total()}}},
                 {"by_phase",
                  {{"former", r.ledger.former_total()}, {"latter", r.ledger.latter_total()}}},
                 {"entries", std::move(entries)}};
  j["baseline_macs"] = r.baseline_macs;
  j["drift"] = {{"final_l2_rel", r.drift.final_l2_rel},
                {"final_cosine", r.drift.final_cosine},
                {"per_step", std::move(per_step)}};
  j["speedup_macs"] = r.speedup_macs;
  return j;
}

std::string ledger_csv(const MacLedger& ledger) {
  std::string out = "step,role,branch,macs\n";
  for (const auto& e : ledger.entries()) {
    out += std::to_string(e.step) + "," + std::string(to_string(e.role)) + "," +
           std::string(to_string(e.branch)) + "," + std::to_string(e.macs) + "\n";
  }
  return out;
}

std::string drift_csv(const DriftReport& d) {
  std::string out = "step,l2_rel,cosine\n";
  for (const auto& p : d.per_step) {
    out += std::to_string(p.step) + "," + format_double(p.l2_rel) + "," + format_double(p.cosine) +
           "\n";
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void emit_csv(const RunReport& report, const std::filesystem::path& dir) {
  write_text_file(dir / "ledger.csv", ledger_csv(report.ledger));
  write_text_file(dir / "drift.csv", drift_csv(report.drift));
}

void emit_report_json(const RunReport& report, const std::filesystem::path& dir) {
  write_text_file(dir / "report.json", to_json(report).dump(2) + "\n");
}

std::string plot_data_csv(const std::vector<SweepPoint>& points) {
  std::string out = "param,value,macs_total,final_l2_rel,final_cosine,speedup\n";
  for (const auto& p : points) {
    out += p.param + "," + format_double(p.value) + "," + std::to_string(p.macs_total) + "," +
           format_double(p.final_l2_rel) + "," + format_double(p.final_cosine) + "," +
           format_double(p.speedup) + "\n";
  }
  return out;
}

void emit_plot_data(const std::vector<SweepPoint>& points, const std::filesystem::path& path) {
  if (points.empty()) throw ValidationError("sweep: no points to emit");
  write_text_file(path, plot_data_csv(points));
}

std::vector<CompareRow> compare_reports(const nlohmann::json& a, const nlohmann::json& b) {
  struct Field {
    const char* name;
    nlohmann::json::json_pointer ptr;
  };
  const std::vector<Field> fields = {
      {"macs_total", nlohmann::json::json_pointer("/ledger/total")},
      {"macs_control", nlohmann::json::json_pointer("/ledger/by_module/control")},
      {"macs_generative", nlohmann::json::json_pointer("/ledger/by_module/generative")},
      {"macs_former", nlohmann::json::json_pointer("/ledger/by_phase/former")},
      {"macs_latter", nlohmann::json::json_pointer("/ledger/by_phase/latter")},
      {"speedup_macs", nlohmann::json::json_pointer("/speedup_macs")},
      {"final_l2_rel", nlohmann::json::json_pointer("/drift/final_l2_rel")},
      {"final_cosine", nlohmann::json::json_pointer("/drift/final_cosine")},
  };
  std::vector<CompareRow> rows;
  for (const auto& f : fields) {
    auto get = [&](const nlohmann::json& doc, const char* which) {
      if (!doc.contains(f.ptr) || !doc.at(f.ptr).is_number()) {
        throw ValidationError(std::string("compare: report ") + which + " lacks numeric '" +
                              f.ptr.to_string() + "'");
      }
      return doc.at(f.ptr).get<double>();
    };
    CompareRow row{f.name, get(a, "A"), get(b, "B"), 0.0};
    row.delta = row.b - row.a;
    rows.push_back(row);
  }
  return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::string out = "metric,a,b,delta\n";
  for (const auto& r : rows) {
    out += r.metric + "," + format_double(r.a) + "," + format_double(r.b) + "," +
           format_double(r.delta) + "\n";
  }
  return out;
}

std::string format_compare_table(const std::vector<CompareRow>& rows) {
  std::ostringstream os;
  auto pad = [](const std::string& s, std::size_t w) {
    return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' ');
  };
  os << pad("metric", 18) << pad("a", 24) << pad("b", 24) << "delta\n";
  for (const auto& r : rows) {
    os << pad(r.metric, 18) << pad(format_double(r.a), 24) << pad(format_double(r.b), 24)
       << format_double(r.delta) << "\n";
  }
  return os.str();
}

}  // namespace hgc
