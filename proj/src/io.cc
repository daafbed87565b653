// Copyright 2026 The dpqr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpqr/io.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dpqr {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParseError, where + ": " + what);
}

Json ParseJson(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    Fail(what, e.what());
  }
}

const Json& Field(const Json& obj, const char* name, const std::string& where) {
  if (!obj.is_object()) Fail(where, "expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) Fail(where, std::string("missing field '") + name + "'");
  return *it;
}

double AsReal(const Json& j, const std::string& where) {
  if (!j.is_number()) Fail(where, "expected a number");
  return j.get<double>();
}

std::uint64_t AsUnsigned(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned()) Fail(where, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::int64_t AsInteger(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) Fail(where, "expected an integer");
  return j.get<std::int64_t>();
}

bool AsBool(const Json& j, const std::string& where) {
  if (!j.is_boolean()) Fail(where, "expected a boolean");
  return j.get<bool>();
}

std::string AsString(const Json& j, const std::string& where) {
  if (!j.is_string()) Fail(where, "expected a string");
  return j.get<std::string>();
}

std::vector<double> AsRealArray(const Json& j, const std::string& where) {
  if (!j.is_array()) Fail(where, "expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(AsReal(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void RejectUnknown(const Json& obj, std::initializer_list<const char*> known,
                   const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) Fail(where, "unknown field '" + it.key() + "'");
  }
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

// Rewraps validation errors from the core constructors as parse errors that
// still carry their message (row/column for workloads, etc.).
template <class F>
auto Validated(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) throw;
    Fail(where, e.what());
  }
}

Json MonteCarloJson(const MonteCarloEstimate& e) {
  return Json{{"mean", e.mean}, {"std_error", e.std_error},
              {"samples", e.samples}};
}

MonteCarloEstimate MonteCarloFromJson(const Json& j, const std::string& where) {
  MonteCarloEstimate e;
  e.mean = AsReal(Field(j, "mean", where), where + ".mean");
  e.std_error = AsReal(Field(j, "std_error", where), where + ".std_error");
  e.samples = AsUnsigned(Field(j, "samples", where), where + ".samples");
  return e;
}

Json PlanJson(const ExperimentPlan& plan) {
  Json j;
  j["algorithms"] = plan.algorithms;
  j["n_grid"] = plan.n_grid;
  j["eps_grid"] = plan.eps_grid;
  j["delta"] = plan.delta;
  j["repetitions"] = plan.repetitions;
  j["k"] = plan.k;
  j["distribution"] = plan.distribution.ToString();
  j["workload"] = plan.workload.ToString();
  j["m"] = plan.m;
  j["master_seed"] = plan.master_seed;
  j["alpha"] = plan.alpha ? Json(*plan.alpha) : Json("auto");
  j["max_iterations"] = plan.max_iterations;
  return j;
}

}  // namespace

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(path, "cannot open for writing");
  out << contents;
  if (!out) Fail(path, "write failed");
}

QueryWorkload ParseWorkload(const std::string& text) {
  const Json j = ParseJson(text, "workload");
  const std::string where = "workload";
  if (!j.is_object()) Fail(where, "expected an object");
  RejectUnknown(j, {"k", "symmetric", "queries"}, where);
  const std::uint64_t k = AsUnsigned(Field(j, "k", where), "workload.k");
  const bool symmetric = j.contains("symmetric")
                             ? AsBool(j["symmetric"], "workload.symmetric")
                             : false;
  const Json& rows = Field(j, "queries", where);
  if (!rows.is_array()) Fail("workload.queries", "expected an array");
  std::vector<double> flat;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string at = "workload.queries[" + std::to_string(i) + "]";
    std::vector<double> row = AsRealArray(rows[i], at);
    if (row.size() != k) {
      Fail(at, "row " + std::to_string(i) + " has " +
                   std::to_string(row.size()) + " entries, expected " +
                   std::to_string(k));
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Validated(where, [&] {
    return QueryWorkload::FromFlat(k, std::move(flat), symmetric);
  });
}

std::string SerializeWorkload(const QueryWorkload& w) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < w.m(); ++i) {
    auto r = w.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  Json j;
  j["k"] = w.k();
  j["symmetric"] = w.symmetric();
  j["queries"] = std::move(rows);
  return Dump(j);
}

QueryWorkload LoadWorkload(const std::string& path) {
  return ParseWorkload(ReadFile(path));
}

void WriteWorkload(const QueryWorkload& w, const std::string& path) {
  WriteFile(path, SerializeWorkload(w));
}

Dataset ParseDataset(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t k = 0;
  bool have_header = false;
  std::vector<std::uint32_t> points;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string where = "dataset line " + std::to_string(line_no);
    if (!have_header) {
      if (line.rfind("k=", 0) != 0) Fail(where, "expected header 'k=<int>'");
      const char* first = line.data() + 2;
      const char* last = line.data() + line.size();
      auto [ptr, ec] = std::from_chars(first, last, k);
      if (ec != std::errc() || ptr != last || k == 0) {
        Fail(where, "invalid universe size '" + line.substr(2) + "'");
      }
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    std::uint64_t v = 0;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(line.data(), last, v);
    if (ec != std::errc() || ptr != last) {
      Fail(where, "invalid index '" + line + "'");
    }
    if (v >= k) {
      Fail(where, "index " + std::to_string(v) + " is not below k=" +
                      std::to_string(k));
    }
    points.push_back(static_cast<std::uint32_t>(v));
  }
  if (!have_header) Fail("dataset line 1", "missing header 'k=<int>'");
  if (points.empty()) Fail("dataset", "no data points");
  return Dataset::Create(std::move(points), k);
}

std::string SerializeDataset(const Dataset& data) {
  std::string out = "k=" + std::to_string(data.k()) + "\n";
  out.reserve(out.size() + data.n() * 4);
  for (std::uint32_t z : data.points()) {
    out += std::to_string(z);
    out += '\n';
  }
  return out;
}

Dataset LoadDataset(const std::string& path) {
  return ParseDataset(ReadFile(path));
}

void WriteDataset(const Dataset& data, const std::string& path) {
  WriteFile(path, SerializeDataset(data));
}

SimplexVector ParseDistribution(const std::string& text) {
  const Json j = ParseJson(text, "distribution");
  const std::string where = "distribution";
  if (!j.is_object()) Fail(where, "expected an object");
  RejectUnknown(j, {"k", "values"}, where);
  const std::uint64_t k = AsUnsigned(Field(j, "k", where), "distribution.k");
  std::vector<double> values =
      AsRealArray(Field(j, "values", where), "distribution.values");
  if (values.size() != k) {
    Fail("distribution.values", "expected " + std::to_string(k) + " entries");
  }
  return Validated(where,
                   [&] { return SimplexVector::Create(std::move(values)); });
}

std::string SerializeDistribution(const SimplexVector& p) {
  Json j;
  j["k"] = p.size();
  j["values"] = p.vector();
  return Dump(j);
}

SimplexVector LoadDistribution(const std::string& path) {
  return ParseDistribution(ReadFile(path));
}

void WriteDistribution(const SimplexVector& p, const std::string& path) {
  WriteFile(path, SerializeDistribution(p));
}

std::string SerializeReport(const RunReport& r, bool include_timings) {
  Json j;
  j["algorithm"] = r.algorithm;
  j["inputs"] = Json{{"k", r.k},     {"m", r.m},
                     {"n", r.n},     {"epsilon", r.epsilon},
                     {"delta", r.delta}, {"alpha", r.alpha},
                     {"alpha_auto", r.alpha_auto}, {"seed", r.seed}};
  if (r.non_private) {
    j["privacy"] = kNonPrivateLabel;
    j["privacy_spent"] = kNonPrivateLabel;
  } else {
    j["privacy"] = "approximate-dp";
    j["privacy_spent"] = r.privacy_spent ? Json(*r.privacy_spent) : Json(nullptr);
  }
  Json schedule;
  if (r.fw_schedule) {
    schedule["iterations"] = r.fw_schedule->iterations;
    schedule["gamma"] = r.fw_schedule->gamma;
    schedule["lambda"] = r.fw_schedule->lambda;
    schedule["capped"] = r.fw_schedule->capped;
    schedule["t_diameter"] = r.t_diameter == TDiameter::kD1 ? "d1" : "dinf";
    if (r.output_iterate) schedule["output_iterate"] = *r.output_iterate;
  }
  if (r.am_schedule) {
    schedule["iterations"] = r.am_schedule->iterations;
    schedule["sigma"] = r.am_schedule->sigma;
    schedule["alpha"] = r.am_schedule->alpha;
    schedule["eta_offset"] = r.am_schedule->eta_offset;
    schedule["capped"] = r.am_schedule->capped;
    schedule["entropy_weight"] = r.entropy_weight;
  }
  j["schedule"] = schedule.is_null() ? Json::object() : schedule;
  if (r.width) j["width"] = MonteCarloJson(*r.width);
  if (r.regime_ok) j["regime_ok"] = *r.regime_ok;
  j["priv"] = r.priv.vector();
  j["empirical_error"] = r.empirical_error;
  if (r.population_error) j["population_error"] = *r.population_error;
  j["answers"] = r.answers;
  if (include_timings) {
    Json t = Json::object();
    for (const auto& [name, ms] : r.timings_ms) t[name] = ms;
    j["timings_ms"] = t;
  }
  j["warnings"] = r.warnings;
  return Dump(j);
}

RunReport ParseReport(const std::string& text) {
  const Json j = ParseJson(text, "report");
  const std::string w = "report";
  if (!j.is_object()) Fail(w, "expected an object");
  RejectUnknown(j,
                {"algorithm", "inputs", "privacy", "privacy_spent", "schedule",
                 "width", "regime_ok", "priv", "empirical_error",
                 "population_error", "answers", "timings_ms", "warnings"},
                w);
  RunReport r;
  r.algorithm = AsString(Field(j, "algorithm", w), "report.algorithm");
  if (r.algorithm != "dpfw" && r.algorithm != "dpam") {
    Fail("report.algorithm", "unknown algorithm '" + r.algorithm + "'");
  }
  const Json& in = Field(j, "inputs", w);
  const std::string wi = "report.inputs";
  r.k = AsUnsigned(Field(in, "k", wi), wi + ".k");
  r.m = AsUnsigned(Field(in, "m", wi), wi + ".m");
  r.n = AsUnsigned(Field(in, "n", wi), wi + ".n");
  r.epsilon = AsReal(Field(in, "epsilon", wi), wi + ".epsilon");
  r.delta = AsReal(Field(in, "delta", wi), wi + ".delta");
  r.alpha = AsReal(Field(in, "alpha", wi), wi + ".alpha");
  r.alpha_auto = AsBool(Field(in, "alpha_auto", wi), wi + ".alpha_auto");
  r.seed = AsUnsigned(Field(in, "seed", wi), wi + ".seed");

  const std::string privacy = AsString(Field(j, "privacy", w), "report.privacy");
  r.non_private = privacy == kNonPrivateLabel;
  const Json& spent = Field(j, "privacy_spent", w);
  if (spent.is_number()) r.privacy_spent = spent.get<double>();

  const Json& s = Field(j, "schedule", w);
  const std::string ws = "report.schedule";
  if (r.algorithm == "dpfw") {
    FWSchedule fw;
    fw.iterations = AsInteger(Field(s, "iterations", ws), ws + ".iterations");
    fw.gamma = AsReal(Field(s, "gamma", ws), ws + ".gamma");
    fw.lambda = AsReal(Field(s, "lambda", ws), ws + ".lambda");
    fw.capped = AsBool(Field(s, "capped", ws), ws + ".capped");
    r.fw_schedule = fw;
    const std::string td = AsString(Field(s, "t_diameter", ws), ws + ".t_diameter");
    if (td != "d1" && td != "dinf") Fail(ws + ".t_diameter", "expected d1 or dinf");
    r.t_diameter = td == "d1" ? TDiameter::kD1 : TDiameter::kDinf;
    if (s.contains("output_iterate")) {
      r.output_iterate = AsInteger(s["output_iterate"], ws + ".output_iterate");
    }
  } else {
    AMSchedule am;
    am.iterations = AsInteger(Field(s, "iterations", ws), ws + ".iterations");
    am.sigma = AsReal(Field(s, "sigma", ws), ws + ".sigma");
    am.alpha = AsReal(Field(s, "alpha", ws), ws + ".alpha");
    am.eta_offset = AsReal(Field(s, "eta_offset", ws), ws + ".eta_offset");
    am.capped = AsBool(Field(s, "capped", ws), ws + ".capped");
    r.am_schedule = am;
    r.entropy_weight =
        AsString(Field(s, "entropy_weight", ws), ws + ".entropy_weight");
  }
  if (j.contains("width")) r.width = MonteCarloFromJson(j["width"], "report.width");
  if (j.contains("regime_ok")) r.regime_ok = AsBool(j["regime_ok"], "report.regime_ok");
  std::vector<double> priv = AsRealArray(Field(j, "priv", w), "report.priv");
  // Validate, but keep the stored digits: renormalizing would break round trips.
  Validated("report.priv", [&] { return SimplexVector::Create(priv); });
  r.priv = SimplexVector::FromTrusted(std::move(priv));
  r.empirical_error =
      AsReal(Field(j, "empirical_error", w), "report.empirical_error");
  if (j.contains("population_error")) {
    r.population_error = AsReal(j["population_error"], "report.population_error");
  }
  r.answers = AsRealArray(Field(j, "answers", w), "report.answers");
  if (j.contains("timings_ms")) {
    const Json& t = j["timings_ms"];
    if (!t.is_object()) Fail("report.timings_ms", "expected an object");
    for (auto it = t.begin(); it != t.end(); ++it) {
      r.timings_ms[it.key()] = AsReal(it.value(), "report.timings_ms." + it.key());
    }
  }
  const Json& warns = Field(j, "warnings", w);
  if (!warns.is_array()) Fail("report.warnings", "expected an array");
  for (std::size_t i = 0; i < warns.size(); ++i) {
    r.warnings.push_back(
        AsString(warns[i], "report.warnings[" + std::to_string(i) + "]"));
  }
  return r;
}

RunReport LoadReport(const std::string& path) {
  return ParseReport(ReadFile(path));
}

void WriteReport(const RunReport& report, const std::string& path,
                 bool include_timings) {
  WriteFile(path, SerializeReport(report, include_timings));
}

ExperimentPlan ParsePlan(const std::string& text) {
  const Json j = ParseJson(text, "plan");
  const std::string w = "plan";
  if (!j.is_object()) Fail(w, "expected an object");
  RejectUnknown(j,
                {"algorithms", "n_grid", "eps_grid", "delta", "repetitions", "k",
                 "distribution", "workload", "m", "master_seed", "alpha",
                 "max_iterations"},
                w);
  ExperimentPlan plan = DefaultPlan();
  if (j.contains("algorithms")) {
    const Json& a = j["algorithms"];
    if (a.is_string()) {
      const std::string s = a.get<std::string>();
      plan.algorithms = s == "both" ? std::vector<std::string>{"dpfw", "dpam"}
                                    : std::vector<std::string>{s};
    } else if (a.is_array()) {
      plan.algorithms.clear();
      for (std::size_t i = 0; i < a.size(); ++i) {
        plan.algorithms.push_back(
            AsString(a[i], "plan.algorithms[" + std::to_string(i) + "]"));
      }
    } else {
      Fail("plan.algorithms", "expected a string or an array");
    }
  }
  if (j.contains("n_grid")) {
    const Json& a = j["n_grid"];
    if (!a.is_array()) Fail("plan.n_grid", "expected an array");
    plan.n_grid.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      plan.n_grid.push_back(
          AsUnsigned(a[i], "plan.n_grid[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("eps_grid")) plan.eps_grid = AsRealArray(j["eps_grid"], "plan.eps_grid");
  if (j.contains("delta")) plan.delta = AsReal(j["delta"], "plan.delta");
  if (j.contains("repetitions")) {
    plan.repetitions = AsUnsigned(j["repetitions"], "plan.repetitions");
  }
  if (j.contains("k")) plan.k = AsUnsigned(j["k"], "plan.k");
  if (j.contains("m")) plan.m = AsUnsigned(j["m"], "plan.m");
  if (j.contains("master_seed")) {
    plan.master_seed = AsUnsigned(j["master_seed"], "plan.master_seed");
  }
  if (j.contains("max_iterations")) {
    plan.max_iterations = AsInteger(j["max_iterations"], "plan.max_iterations");
  }
  if (j.contains("alpha")) {
    const Json& a = j["alpha"];
    if (a.is_string() && a.get<std::string>() == "auto") {
      plan.alpha.reset();
    } else {
      plan.alpha = AsReal(a, "plan.alpha");
    }
  }
  if (j.contains("distribution")) {
    const std::string s = AsString(j["distribution"], "plan.distribution");
    plan.distribution =
        Validated("plan.distribution", [&] { return DistributionSpec::Parse(s); });
  }
  if (j.contains("workload")) {
    const std::string s = AsString(j["workload"], "plan.workload");
    plan.workload =
        Validated("plan.workload", [&] { return WorkloadSpec::Parse(s); });
  }
  Validated(w, [&] {
    plan.Validate();
    return 0;
  });
  return plan;
}

std::string SerializePlan(const ExperimentPlan& plan) {
  return Dump(PlanJson(plan));
}

ExperimentPlan LoadPlan(const std::string& path) {
  return ParsePlan(ReadFile(path));
}

std::string SerializeResult(const ExperimentResult& result,
                            bool include_timings) {
  Json j;
  j["plan"] = PlanJson(result.plan);
  j["population"] = result.population.vector();
  j["width"] = result.width;
  Json cells = Json::array();
  for (const CellRecord& c : result.cells) {
    Json cj;
    cj["algorithm"] = c.algorithm;
    cj["n"] = c.n;
    cj["epsilon"] = c.epsilon;
    cj["population_mean"] = c.population_mean;
    cj["population_std"] = c.population_std;
    cj["empirical_mean"] = c.empirical_mean;
    cj["empirical_std"] = c.empirical_std;
    if (include_timings) cj["runtime_mean_ms"] = c.runtime_mean_ms;
    if (c.regime_ok) cj["regime_ok"] = *c.regime_ok;
    cj["failures"] = c.failures;
    cj["errors"] = c.errors;
    Json reps = Json::array();
    for (const RepetitionRecord& r : c.repetitions) {
      Json rj;
      rj["seed"] = r.seed;
      rj["alpha"] = r.alpha;
      rj["iterations"] = r.iterations;
      rj["population_error"] = r.population_error;
      rj["empirical_error"] = r.empirical_error;
      rj["sampling_forward"] = r.sampling_forward;
      rj["sampling_backward"] = r.sampling_backward;
      if (r.regime_ok) rj["regime_ok"] = *r.regime_ok;
      if (include_timings) rj["runtime_ms"] = r.runtime_ms;
      rj["priv"] = r.priv;
      reps.push_back(std::move(rj));
    }
    cj["repetitions"] = std::move(reps);
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  Json slopes = Json::array();
  for (const SlopeRecord& s : result.slopes) {
    slopes.push_back(Json{{"algorithm", s.algorithm},
                          {"epsilon", s.epsilon},
                          {"slope", s.fit.slope},
                          {"intercept", s.fit.intercept},
                          {"std_error", s.fit.std_error}});
  }
  j["slopes"] = std::move(slopes);
  return Dump(j);
}

void WriteResult(const ExperimentResult& result, const std::string& path,
                 bool include_timings) {
  WriteFile(path, SerializeResult(result, include_timings));
}

}  // namespace dpqr
