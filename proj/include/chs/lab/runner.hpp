#pragma once

// Runs registered experiments and suites and writes their reports.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <string>
#include <vector>

#include "chs/error.hpp"
#include "chs/lab/config.hpp"
#include "chs/lab/experiment.hpp"
#include "chs/lab/registry.hpp"
#include "chs/lab/report.hpp"
#include "chs/limits.hpp"
#include "chs/rng.hpp"

namespace chs::lab {

struct RunOptions {
  std::uint64_t seed = 0;
  Limits caps{};
  unsigned jobs = 1;       // workers inside Monte Carlo experiments
  bool parallel = false;   // run suite experiments concurrently
  std::map<std::string, double> tolerances;
};

/// Seed of the i-th experiment of a suite.
inline std::uint64_t derive_seed(std::uint64_t suite_seed, std::size_t index) {
  CounterRng rng(suite_seed, 0x5eed0000ULL + index);
  return rng();
}

/// Module errors become a failed "error" check; ConfigInvalid propagates.
inline ExperimentReport run_experiment(const Experiment& e, const ParamMap& overrides, std::uint64_t seed,
                                       const RunOptions& opt) {
  const Params params(e.defaults, overrides);
  ExperimentReport rep;
  rep.experiment = e.name;
  rep.params = params.resolved();
  rep.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  Context ctx(seed, opt.jobs, opt.tolerances);
  {
    ScopedLimits caps(opt.caps);
    try {
      e.body(params, ctx);
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::ConfigInvalid) throw;
      ctx.fail_with(err);
    }
  }
  rep.checks = ctx.take();
  rep.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline SuiteReport run(const ExperimentConfig& cfg, unsigned jobs = 1) {
  const Experiment* e = find_experiment(cfg.experiment);
  if (!e) throw Error(ErrorKind::ConfigInvalid, "unknown experiment '" + cfg.experiment + "'");
  RunOptions opt{cfg.seed, cfg.caps, jobs, false, cfg.tolerances};
  SuiteReport s;
  s.suite = cfg.experiment;
  s.seed = cfg.seed;
  s.experiments.push_back(run_experiment(*e, cfg.params, cfg.seed, opt));
  s.runtime_ms = s.experiments.back().runtime_ms;
  return s;
}

inline SuiteReport run_suite(const std::string& name, const RunOptions& opt) {
  const auto entries = suite_entries(name);
  SuiteReport s;
  s.suite = name;
  s.seed = opt.seed;
  const auto start = std::chrono::steady_clock::now();
  auto one = [&](std::size_t i) {
    const Experiment* e = find_experiment(entries[i].experiment);
    if (!e) throw Error(ErrorKind::ConfigInvalid, "suite references unknown experiment " + entries[i].experiment);
    return run_experiment(*e, entries[i].params, derive_seed(opt.seed, i), opt);
  };
  s.experiments.resize(entries.size());
  if (opt.parallel) {
    std::vector<std::future<ExperimentReport>> fut;
    for (std::size_t i = 0; i < entries.size(); ++i) fut.push_back(std::async(std::launch::async, one, i));
    for (std::size_t i = 0; i < entries.size(); ++i) s.experiments[i] = fut[i].get();
  } else {
    for (std::size_t i = 0; i < entries.size(); ++i) s.experiments[i] = one(i);
  }
  s.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return s;
}

/// Writes <dir>/<suite>.json or .csv and returns the path.
inline std::filesystem::path write_report(const SuiteReport& s, const std::filesystem::path& dir, Format format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::ConfigInvalid, "cannot create output directory '" + dir.string() + "'");
  const auto path = dir / (s.suite + (format == Format::Json ? ".json" : ".csv"));
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ConfigInvalid, "cannot write '" + path.string() + "'");
  if (format == Format::Json) {
    out << to_json(s).dump(2) << '\n';
  } else {
    write_csv(out, s);
  }
  return path;
}

}  // namespace chs::lab
