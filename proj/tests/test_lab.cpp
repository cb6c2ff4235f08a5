#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chs/lab.hpp"

using namespace chs;
using namespace chs::lab;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

bool config_invalid(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == ErrorKind::ConfigInvalid;
  }
  return false;
}

const Check& find_check(const ExperimentReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  FAIL("missing check " << name);
  return r.checks.front();
}

// Every number of a report except runtimes.
nlohmann::json strip_runtimes(nlohmann::json j) {
  if (j.is_object()) {
    j.erase("runtime_ms");
    for (auto& [k, v] : j.items()) v = strip_runtimes(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_runtimes(v);
  }
  return j;
}

}  // namespace

TEST_CASE("config parsing", "[lab]") {
  const auto cfg = parse(
      "[experiment]\nname = kneser\nseed = 9\n[params]\nv = 7\nk = 3\n[caps]\ndim = 100\nenum = 5000\n"
      "[tolerances]\nexact one-norm = 1e-6\n[output]\npath = somewhere\nformat = csv\n");
  CHECK(cfg.experiment == "kneser");
  CHECK(cfg.seed == 9);
  CHECK(cfg.params.at("v") == "7");
  CHECK(cfg.caps.max_dim == 100);
  CHECK(cfg.caps.max_enum == 5000);
  CHECK(cfg.tolerances.at("exact one-norm") == 1e-6);
  CHECK(cfg.output == std::optional<std::string>("somewhere"));
  CHECK(cfg.format == Format::Csv);

  CHECK(config_invalid([] { parse("[experiment]\nname = nope\n"); }));
  CHECK(config_invalid([] { parse("[params]\nv = 5\n"); }));
  CHECK(config_invalid([] { parse("[experiment]\nname = kneser\n[params]\nw = 5\n"); }));
  CHECK(config_invalid([] { parse("[experiment]\nname = kneser\n[params]\nv = five\n"); }));
  CHECK(config_invalid([] { parse("[experiment]\nname = kneser\n[params]\nv = -5\n"); }));
  CHECK(config_invalid([] { parse("[experiment]\nname = kneser\n[output]\nformat = xml\n"); }));
  CHECK(config_invalid([] { parse("[experiment]\nname = kneser\n[caps]\ndim = 0\n"); }));
  CHECK(config_invalid([] { parse("[experiment]\nname = kneser\n[extra]\na = 1\n"); }));
  CHECK(config_invalid([] { parse("[experiment]\nname = kneser\nseed = x\n"); }));
  CHECK(config_invalid([] { parse("not an ini [[\n"); }));
  CHECK(config_invalid([] { load_config("/nonexistent/config.ini"); }));
  CHECK(parse_u64("trials", "1e6") == 1000000);
  CHECK(config_invalid([] { parse_u64("trials", "1.5"); }));
}

TEST_CASE("shipped configs parse", "[lab]") {
  const std::filesystem::path dir = CHS_CONFIG_DIR;
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".ini") continue;
    INFO(entry.path());
    CHECK_NOTHROW(load_config(entry.path().string()));
    ++n;
  }
  CHECK(n >= 3);
}

TEST_CASE("run examples", "[lab]") {
  const auto k = run(parse("[experiment]\nname = kneser\n[params]\nv = 5\nk = 2\n"));
  REQUIRE(k.experiments.size() == 1);
  CHECK(k.passed());
  CHECK(find_check(k.experiments[0], "exact one-norm").value == Catch::Approx(16.0));
  CHECK(find_check(k.experiments[0], "formula").value == 16.0);

  const auto l = run(parse("[experiment]\nname = locc-advantage\nseed = 5\n[params]\nd = 4\nt = 1\ntrials = 1000000\n"));
  CHECK(l.passed());
  CHECK(find_check(l.experiments[0], "closed form").value == Catch::Approx(0.15));
  CHECK(find_check(l.experiments[0], "estimate").mode == Mode::Sampled);

  const auto h = run(parse("[experiment]\nname = prs-hybrid\n[params]\nlambda = 2\nn = 2\nell = 1\nt = 1\n"));
  CHECK(h.passed());
  CHECK(find_check(h.experiments[0], "real state is a density matrix").pass);
}

TEST_CASE("module errors become failed checks", "[lab]") {
  const auto r = run(parse("[experiment]\nname = kneser\n[params]\nv = 3\nk = 2\n"));
  CHECK_FALSE(r.passed());
  const auto& c = find_check(r.experiments[0], "error");
  CHECK(c.error == std::optional<std::string>("ParameterError"));
  CHECK_FALSE(c.pass);

  // caps apply inside the run
  const auto capped = run(parse("[experiment]\nname = haar-moment\n[params]\nd = 4\nt = 2\n[caps]\ndim = 8\n"));
  CHECK(find_check(capped.experiments[0], "error").error == std::optional<std::string>("DimensionOverflow"));
  CHECK(limits().max_dim == Limits{}.max_dim);
}

TEST_CASE("tolerance overrides feed the verdict", "[lab]") {
  // a negative margin is impossible to meet, so use a strict relation on a tiny tolerance instead
  const auto strict = run(parse("[experiment]\nname = locc-advantage\nseed = 1\n[params]\nd = 4\nt = 1\ntrials = 1000\n"
                                "[tolerances]\n|estimate - closed form| within 4 standard errors = 0\n"));
  const auto& c = find_check(strict.experiments[0], "|estimate - closed form| within 4 standard errors");
  CHECK(c.tolerance == 0.0);
  CHECK(c.pass == c.evaluate());

  Check manual{"x", 1.0, 0.5, 0.0, Relation::Le, Mode::Exact};
  CHECK_FALSE(manual.evaluate());
  manual.tolerance = 0.5;
  CHECK(manual.evaluate());
  manual.relation = Relation::Record;
  manual.value = std::nan("");
  CHECK(manual.evaluate());
}

TEST_CASE("suites", "[lab]") {
  CHECK(config_invalid([] { suite_entries("nope"); }));
  for (const auto& s : suite_names()) {
    for (const auto& e : suite_entries(s)) {
      INFO(s << " " << e.experiment);
      const Experiment* ex = find_experiment(e.experiment);
      REQUIRE(ex != nullptr);
      CHECK_NOTHROW(Params(ex->defaults, e.params));
    }
  }
  CHECK(suite_entries("all").size() ==
        suite_entries("lemmas").size() + suite_entries("bounds").size() + suite_entries("montecarlo").size());
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));

  RunOptions opt;
  opt.seed = 42;
  const auto a = run_suite("montecarlo", opt);
  CHECK(a.passed());
  opt.jobs = 3;
  opt.parallel = true;
  const auto b = run_suite("montecarlo", opt);
  CHECK(strip_runtimes(to_json(a)) == strip_runtimes(to_json(b)));
  opt.seed = 43;
  const auto c = run_suite("montecarlo", opt);
  CHECK(strip_runtimes(to_json(a)) != strip_runtimes(to_json(c)));
}

TEST_CASE("report serialization", "[lab]") {
  RunOptions opt;
  const auto s = run_suite("lemmas", opt);
  CHECK(s.passed());
  const auto j = to_json(s);
  for (const char* key : {"suite", "seed", "version", "experiments", "passed", "failures", "runtime_ms"})
    CHECK(j.contains(key));
  std::size_t rows = 0;
  for (const auto& e : j["experiments"]) {
    for (const char* key : {"experiment", "params", "seed", "checks", "passed", "runtime_ms"}) CHECK(e.contains(key));
    for (const auto& c : e["checks"]) {
      ++rows;
      for (const char* key : {"name", "value", "reference", "tolerance", "relation", "mode", "verdict", "runtime_ms"})
        CHECK(c.contains(key));
      const auto mode = c["mode"].get<std::string>();
      CHECK((mode == "exact" || mode == "sampled" || mode == "info"));
    }
  }
  std::ostringstream csv;
  write_csv(csv, s);
  const auto text = csv.str();
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == rows + 1);
  CHECK(text.rfind("suite,experiment,params,seed,check,", 0) == 0);
  CHECK(number(std::nan("")) == "nan");

  const auto dir = std::filesystem::temp_directory_path() / "chs_lab_test";
  std::filesystem::remove_all(dir);
  const auto path = write_report(s, dir, Format::Json);
  std::ifstream in(path);
  const auto back = nlohmann::json::parse(in);
  CHECK(back == j);
  CHECK(write_report(s, dir, Format::Csv).extension() == ".csv");
  std::filesystem::remove_all(dir);
}
