#pragma once

// Verdict records and their JSON / CSV serializations.

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "chs/error.hpp"

namespace chs::lab {

inline constexpr const char* kVersion = "0.1.0";

inline std::string version_stamp() {
  std::ostringstream os;
  os << "chs " << kVersion << "; eigen " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.'
     << EIGEN_MINOR_VERSION;
#if defined(__clang__)
  os << "; clang " << __clang_major__ << '.' << __clang_minor__;
#elif defined(__GNUC__)
  os << "; gcc " << __GNUC__ << '.' << __GNUC_MINOR__;
#endif
  return os.str();
}

enum class Mode { Exact, Sampled, Info };
enum class Relation { Le, Ge, Eq, Lt, Gt, Record };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::Exact: return "exact";
    case Mode::Sampled: return "sampled";
    case Mode::Info: return "info";
  }
  return "unknown";
}

inline std::string to_string(Relation r) {
  switch (r) {
    case Relation::Le: return "<=";
    case Relation::Ge: return ">=";
    case Relation::Eq: return "==";
    case Relation::Lt: return "<";
    case Relation::Gt: return ">";
    case Relation::Record: return "record";
  }
  return "?";
}

/// One comparison. The verdict is recomputed from value, reference, tolerance
/// and relation; Record rows carry no verdict and always pass.
struct Check {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::Record;
  Mode mode = Mode::Exact;
  bool pass = true;
  double runtime_ms = 0.0;
  std::optional<std::string> error;  // error kind when the check raised

  bool evaluate() const {
    if (error) return false;
    if (!std::isfinite(value) && relation != Relation::Record) return false;
    switch (relation) {
      case Relation::Le: return value <= reference + tolerance;
      case Relation::Ge: return value >= reference - tolerance;
      case Relation::Eq: return std::abs(value - reference) <= tolerance;
      case Relation::Lt: return value < reference;
      case Relation::Gt: return value > reference;
      case Relation::Record: return true;
    }
    return false;
  }
};

struct ExperimentReport {
  std::string experiment;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  double runtime_ms = 0.0;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::string version = version_stamp();
  std::vector<ExperimentReport> experiments;
  double runtime_ms = 0.0;

  bool passed() const {
    for (const auto& e : experiments)
      if (!e.passed()) return false;
    return true;
  }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& e : experiments)
      for (const auto& c : e.checks) n += !c.pass;
    return n;
  }
};

using nlohmann::json;

/// Non-finite doubles are written as strings so the output stays valid JSON.
inline json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline json to_json(const Check& c) {
  json j{{"name", c.name},
         {"value", number(c.value)},
         {"reference", number(c.reference)},
         {"tolerance", number(c.tolerance)},
         {"relation", to_string(c.relation)},
         {"mode", to_string(c.mode)},
         {"verdict", c.relation == Relation::Record ? "recorded" : (c.pass ? "pass" : "fail")},
         {"runtime_ms", c.runtime_ms}};
  if (c.error) j["error"] = *c.error;
  return j;
}

inline json to_json(const ExperimentReport& e) {
  json checks = json::array();
  for (const auto& c : e.checks) checks.push_back(to_json(c));
  return {{"experiment", e.experiment}, {"params", e.params},       {"seed", e.seed},
          {"checks", checks},           {"passed", e.passed()},     {"runtime_ms", e.runtime_ms}};
}

inline json to_json(const SuiteReport& s) {
  json exps = json::array();
  for (const auto& e : s.experiments) exps.push_back(to_json(e));
  return {{"suite", s.suite},     {"seed", s.seed},           {"version", s.version},
          {"experiments", exps},  {"passed", s.passed()},     {"failures", s.failures()},
          {"runtime_ms", s.runtime_ms}};
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

inline std::string params_string(const std::map<std::string, std::string>& params) {
  std::string s;
  for (const auto& [k, v] : params) {
    if (!s.empty()) s += ';';
    s += k + '=' + v;
  }
  return s;
}

inline void write_csv(std::ostream& os, const SuiteReport& s) {
  os << "suite,experiment,params,seed,check,value,reference,tolerance,relation,mode,verdict,error,runtime_ms\n";
  for (const auto& e : s.experiments) {
    for (const auto& c : e.checks) {
      os << csv_escape(s.suite) << ',' << csv_escape(e.experiment) << ',' << csv_escape(params_string(e.params)) << ','
         << e.seed << ',' << csv_escape(c.name) << ',' << format_double(c.value) << ','
         << format_double(c.reference) << ',' << format_double(c.tolerance) << ',' << csv_escape(to_string(c.relation))
         << ',' << to_string(c.mode) << ',' << (c.relation == Relation::Record ? "recorded" : (c.pass ? "pass" : "fail"))
         << ',' << csv_escape(c.error.value_or("")) << ',' << format_double(c.runtime_ms) << '\n';
    }
  }
}

/// Summary table for the terminal.
inline void write_summary(std::ostream& os, const SuiteReport& s) {
  os << "suite " << s.suite << " (seed " << s.seed << ", " << s.version << ")\n";
  for (const auto& e : s.experiments) {
    os << (e.passed() ? "  PASS " : "  FAIL ") << e.experiment;
    if (!e.params.empty()) os << " [" << params_string(e.params) << "]";
    os << "  " << std::fixed << std::setprecision(1) << e.runtime_ms << " ms\n";
    os.unsetf(std::ios::fixed);
    for (const auto& c : e.checks) {
      const char* tag = c.relation == Relation::Record ? "rec " : (c.pass ? "ok  " : "FAIL");
      os << "      " << tag << ' ' << c.name << ": " << std::setprecision(10) << c.value;
      if (c.relation != Relation::Record) os << ' ' << to_string(c.relation) << ' ' << c.reference;
      os << " (" << to_string(c.mode) << ")";
      if (c.error) os << " error " << *c.error;
      os << '\n';
    }
  }
  os << (s.passed() ? "all checks passed" : std::to_string(s.failures()) + " check(s) failed") << '\n';
}

}  // namespace chs::lab
