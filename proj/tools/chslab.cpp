// chslab: runs registered experiments and suites and writes verdict reports.
// Exit status: 0 all checks pass, 1 some check failed, 2 configuration error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "chs/lab.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr const char* kOutEnv = "CHSLAB_OUT_DIR";

void list_registry(std::ostream& os) {
  os << "experiments:\n";
  for (const auto& e : chs::lab::registry()) {
    os << "  " << e.name << "  " << e.summary << "\n    defaults:";
    for (const auto& [k, v] : e.defaults) os << ' ' << k << '=' << v;
    os << '\n';
  }
  os << "suites:\n";
  for (const auto& s : chs::lab::suite_names())
    os << "  " << s << " (" << chs::lab::suite_entries(s).size() << " experiments)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Common Haar state experiment runner"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string format = "json";
  std::optional<std::size_t> cap_dim, cap_enum;
  unsigned jobs = 1;
  bool parallel = false;
  app.add_option("--seed", seed, "64-bit seed");
  app.add_option("--out", out, "output directory");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--cap-dim", cap_dim, "maximum flat Hilbert-space dimension")->check(CLI::PositiveNumber);
  app.add_option("--cap-enum", cap_enum, "maximum enumeration size")->check(CLI::PositiveNumber);
  app.add_option("--jobs", jobs, "Monte Carlo worker threads")->check(CLI::Range(1u, 1024u));
  app.add_flag("--parallel", parallel, "run suite experiments concurrently");

  std::string config_path, suite_name;
  auto* run_cmd = app.add_subcommand("run", "run one experiment from a config file");
  run_cmd->add_option("config", config_path, "INI config")->required();
  auto* suite_cmd = app.add_subcommand("suite", "run a named suite");
  suite_cmd->add_option("name", suite_name, "lemmas, bounds, montecarlo or all")->required();
  auto* list_cmd = app.add_subcommand("list", "list registered experiments and suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (list_cmd->parsed()) {
      list_registry(std::cout);
      return 0;
    }

    chs::lab::SuiteReport report;
    std::optional<std::string> config_out;
    auto fmt = chs::lab::parse_format(format);
    chs::Limits caps;
    if (run_cmd->parsed()) {
      auto cfg = chs::lab::load_config(config_path);
      if (seed) cfg.seed = *seed;
      if (cap_dim) cfg.caps.max_dim = *cap_dim;
      if (cap_enum) cfg.caps.max_enum = *cap_enum;
      if (app.get_option("--format")->count() == 0) fmt = cfg.format;
      config_out = cfg.output;
      report = chs::lab::run(cfg, jobs);
    } else {
      if (cap_dim) caps.max_dim = *cap_dim;
      if (cap_enum) caps.max_enum = *cap_enum;
      chs::lab::RunOptions opt{seed.value_or(0), caps, jobs, parallel, {}};
      report = chs::lab::run_suite(suite_name, opt);
    }

    std::string dir = "chslab_reports";
    if (out) {
      dir = *out;
    } else if (config_out) {
      dir = *config_out;
    } else if (const char* env = std::getenv(kOutEnv); env && *env) {
      dir = env;
    }
    chs::lab::write_summary(std::cout, report);
    const auto path = chs::lab::write_report(report, dir, fmt);
    std::cout << "report: " << path.string() << '\n';
    return report.passed() ? 0 : kExitFail;
  } catch (const chs::Error& e) {
    std::cerr << "chslab: " << e.what() << '\n';
    return e.kind() == chs::ErrorKind::ConfigInvalid ? kExitConfig : kExitFail;
  }
}
