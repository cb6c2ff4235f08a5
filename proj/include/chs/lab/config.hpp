#pragma once

// INI experiment configs:
//
//   [experiment]
//   name = kneser
//   seed = 7
//   [params]
//   v = 5
//   [caps]
//   dim = 16384
//   enum = 1000000
//   [tolerances]
//   exact one-norm = 1e-9
//   [output]
//   path = out/kneser
//   format = json

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "chs/error.hpp"
#include "chs/lab/experiment.hpp"
#include "chs/lab/registry.hpp"
#include "chs/limits.hpp"

namespace chs::lab {

enum class Format { Json, Csv };

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw Error(ErrorKind::ConfigInvalid, "format must be json or csv, got '" + s + "'");
}

struct ExperimentConfig {
  std::string experiment;
  ParamMap params;
  std::uint64_t seed = 0;
  Limits caps{};
  std::map<std::string, double> tolerances;
  std::optional<std::string> output;
  Format format = Format::Json;
};

inline double parse_tolerance(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size() || !(v >= 0.0)) throw std::invalid_argument("bad");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigInvalid, "tolerance '" + key + "' must be a non-negative number");
  }
}

/// Parses and validates a config; every problem surfaces as ConfigInvalid.
inline ExperimentConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("malformed config: ") + e.what());
  }
  for (const auto& [section, _] : tree) {
    if (section != "experiment" && section != "params" && section != "caps" && section != "tolerances" &&
        section != "output")
      throw Error(ErrorKind::ConfigInvalid, "unknown section [" + section + "]");
  }
  ExperimentConfig cfg;
  const auto exp = tree.get_child_optional("experiment");
  if (!exp) throw Error(ErrorKind::ConfigInvalid, "missing [experiment] section");
  for (const auto& [k, v] : *exp) {
    const auto value = v.get_value<std::string>();
    if (k == "name") {
      cfg.experiment = value;
    } else if (k == "seed") {
      cfg.seed = parse_u64("seed", value);
    } else {
      throw Error(ErrorKind::ConfigInvalid, "unknown key '" + k + "' in [experiment]");
    }
  }
  const Experiment* e = find_experiment(cfg.experiment);
  if (!e) throw Error(ErrorKind::ConfigInvalid, "unknown experiment '" + cfg.experiment + "'");
  if (const auto params = tree.get_child_optional("params"))
    for (const auto& [k, v] : *params) cfg.params[k] = v.get_value<std::string>();
  Params(e->defaults, cfg.params);  // rejects unknown or malformed parameters
  if (const auto caps = tree.get_child_optional("caps")) {
    for (const auto& [k, v] : *caps) {
      const auto value = parse_u64(k, v.get_value<std::string>());
      if (value == 0) throw Error(ErrorKind::ConfigInvalid, "cap '" + k + "' must be positive");
      if (k == "dim") {
        cfg.caps.max_dim = value;
      } else if (k == "enum") {
        cfg.caps.max_enum = value;
      } else {
        throw Error(ErrorKind::ConfigInvalid, "unknown cap '" + k + "'");
      }
    }
  }
  if (const auto tols = tree.get_child_optional("tolerances"))
    for (const auto& [k, v] : *tols) cfg.tolerances[k] = parse_tolerance(k, v.get_value<std::string>());
  if (const auto out = tree.get_child_optional("output")) {
    for (const auto& [k, v] : *out) {
      if (k == "path") {
        cfg.output = v.get_value<std::string>();
      } else if (k == "format") {
        cfg.format = parse_format(v.get_value<std::string>());
      } else {
        throw Error(ErrorKind::ConfigInvalid, "unknown key '" + k + "' in [output]");
      }
    }
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot open config '" + path + "'");
  return parse_config(in);
}

}  // namespace chs::lab
