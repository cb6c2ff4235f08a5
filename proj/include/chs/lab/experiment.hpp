#pragma once

// Parameter access and check recording for registered experiments.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "chs/error.hpp"
#include "chs/lab/report.hpp"

namespace chs::lab {

using ParamMap = std::map<std::string, std::string>;

inline std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
    // accept plain integers and scientific notation such as 1e6
    if (text.find_first_of("eE.") != std::string::npos) {
      const double d = std::stod(text, &pos);
      if (pos != text.size() || d < 0 || d != static_cast<double>(static_cast<unsigned long long>(d)))
        throw std::invalid_argument("not an integer");
      v = static_cast<unsigned long long>(d);
    } else {
      v = std::stoull(text, &pos, 0);
      if (pos != text.size()) throw std::invalid_argument("trailing characters");
    }
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigInvalid, "parameter '" + key + "' expects a non-negative integer, got '" + text + "'");
  }
  return v;
}

/// Parameters resolved from an experiment's defaults and user overrides.
class Params {
 public:
  Params(const ParamMap& defaults, const ParamMap& overrides) : values_(defaults) {
    for (const auto& [k, v] : overrides) {
      if (!values_.count(k)) throw Error(ErrorKind::ConfigInvalid, "unknown parameter '" + k + "'");
      values_[k] = v;
    }
    // parse everything up front so malformed values fail before any work
    for (const auto& [k, v] : values_) {
      std::stringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) parse_u64(k, item);
    }
  }

  std::uint64_t u64(const std::string& key) const { return parse_u64(key, raw(key)); }
  unsigned uint(const std::string& key) const {
    const auto v = u64(key);
    if (v > 0xffffffffULL) throw Error(ErrorKind::ConfigInvalid, "parameter '" + key + "' out of range");
    return static_cast<unsigned>(v);
  }
  std::vector<std::uint64_t> list(const std::string& key) const {
    std::vector<std::uint64_t> out;
    std::stringstream ss(raw(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_u64(key, item));
    return out;
  }
  const ParamMap& resolved() const { return values_; }

 private:
  const std::string& raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw Error(ErrorKind::ConfigInvalid, "missing parameter '" + key + "'");
    return it->second;
  }
  ParamMap values_;
};

/// Collects checks for one experiment run. Each check's runtime is the time
/// elapsed since the previous check.
class Context {
 public:
  using Clock = std::chrono::steady_clock;

  Context(std::uint64_t seed, unsigned jobs, std::map<std::string, double> tolerances)
      : seed_(seed), jobs_(jobs), tolerances_(std::move(tolerances)), last_(Clock::now()) {}

  std::uint64_t seed() const { return seed_; }
  unsigned jobs() const { return jobs_; }

  double tol(const std::string& check, double fallback) const {
    const auto it = tolerances_.find(check);
    return it == tolerances_.end() ? fallback : it->second;
  }

  void check(const std::string& name, double value, Relation rel, double reference, double tolerance, Mode mode) {
    Check c{name, value, reference, tol(name, tolerance), rel, mode};
    c.pass = c.evaluate();
    c.runtime_ms = lap();
    checks_.push_back(std::move(c));
  }
  void record(const std::string& name, double value, Mode mode = Mode::Exact) {
    check(name, value, Relation::Record, 0.0, 0.0, mode);
  }
  void holds(const std::string& name, bool cond, Mode mode = Mode::Exact) {
    check(name, cond ? 1.0 : 0.0, Relation::Eq, 1.0, 0.0, mode);
  }
  void fail_with(const Error& e) {
    Check c{"error", 0.0, 0.0, 0.0, Relation::Eq, Mode::Exact};
    c.error = std::string(to_string(e.kind()));
    c.pass = false;
    c.runtime_ms = lap();
    checks_.push_back(std::move(c));
  }

  std::vector<Check> take() { return std::move(checks_); }

 private:
  double lap() {
    const auto now = Clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

  std::uint64_t seed_;
  unsigned jobs_;
  std::map<std::string, double> tolerances_;
  Clock::time_point last_;
  std::vector<Check> checks_;
};

struct Experiment {
  std::string name;
  std::string summary;
  ParamMap defaults;
  std::function<void(const Params&, Context&)> body;
};

}  // namespace chs::lab
