#pragma once

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "maryland/errors.hpp"
#include "maryland/lattice_box.hpp"
#include "maryland/model.hpp"
#include "maryland/potential.hpp"
#include "maryland/spectrum.hpp"

namespace maryland::io {

/// Malformed, incomplete or inconsistent configuration file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct PotentialSpec {
  std::string kind = "zero";  // zero | constant | piecewise
  double value = 0.0;         // constant
  std::vector<double> breakpoints;
  std::vector<double> values;

  Potential build() const {
    if (kind == "zero") return Potential::zero();
    if (kind == "constant") return Potential::constant(value);
    if (kind == "piecewise") return Potential::piecewise(breakpoints, values);
    throw ConfigError("potential.kind must be zero, constant or piecewise (got '" + kind + "')");
  }
};

struct OutputSpec {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "json"};

  bool wants(const std::string& format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
  }
};

/// Everything a CLI run needs: model, edge potential, numerics and output.
struct RunConfig {
  ModelParams model;
  PotentialSpec potential;
  Numerics numerics;
  OutputSpec output;
};

namespace detail {

inline void reject_unknown(const YAML::Node& node, const std::string& where,
                           std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path + ": expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path + ": cannot convert '" + node.Scalar() + "'");
  }
}

template <typename T>
std::vector<T> sequence(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) throw ConfigError(path + ": expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(scalar<T>(node[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

template <typename T>
void read_opt(const YAML::Node& parent, const char* key, const std::string& where, T& target) {
  if (const YAML::Node n = parent[key]) target = scalar<T>(n, where + "." + key);
}

inline ModelParams parse_model(const YAML::Node& node) {
  reject_unknown(node, "model", {"d1", "d2", "g", "omega", "phi"});
  for (const char* key : {"d1", "d2", "g", "omega", "phi"})
    if (!node[key]) throw ConfigError(std::string("model.") + key + " is required");
  ModelParams p;
  p.d1 = scalar<int>(node["d1"], "model.d1");
  p.d2 = scalar<int>(node["d2"], "model.d2");
  p.g = scalar<double>(node["g"], "model.g");
  p.omega = node["omega"].IsSequence() ? sequence<double>(node["omega"], "model.omega")
                                       : std::vector<double>{scalar<double>(node["omega"], "model.omega")};
  p.phi = scalar<double>(node["phi"], "model.phi");
  return p;
}

inline PotentialSpec parse_potential(const YAML::Node& node) {
  reject_unknown(node, "potential", {"kind", "value", "breakpoints", "values"});
  PotentialSpec s;
  read_opt(node, "kind", "potential", s.kind);
  if (s.kind == "zero") {
    if (node["value"] || node["breakpoints"] || node["values"])
      throw ConfigError("potential: kind 'zero' takes no parameters");
  } else if (s.kind == "constant") {
    if (!node["value"]) throw ConfigError("potential.value is required for kind 'constant'");
    if (node["breakpoints"] || node["values"])
      throw ConfigError("potential: kind 'constant' takes only 'value'");
    s.value = scalar<double>(node["value"], "potential.value");
  } else if (s.kind == "piecewise") {
    if (!node["breakpoints"] || !node["values"])
      throw ConfigError("potential: kind 'piecewise' needs 'breakpoints' and 'values'");
    if (node["value"]) throw ConfigError("potential: kind 'piecewise' takes no 'value'");
    s.breakpoints = sequence<double>(node["breakpoints"], "potential.breakpoints");
    s.values = sequence<double>(node["values"], "potential.values");
  } else {
    throw ConfigError("potential.kind must be zero, constant or piecewise (got '" + s.kind + "')");
  }
  return s;
}

inline Numerics parse_numerics(const YAML::Node& node) {
  reject_unknown(node, "numerics",
                 {"ode_tol", "quad_points_per_axis", "green_points_per_axis", "bisect_tol", "box_sizes",
                  "M_max", "M_check", "beta", "scan_step", "root_tol", "edge_margin", "window",
                  "threads"});
  Numerics n;
  const std::string w = "numerics";
  read_opt(node, "ode_tol", w, n.ode_tol);
  read_opt(node, "quad_points_per_axis", w, n.quad_points_per_axis);
  read_opt(node, "green_points_per_axis", w, n.green_points_per_axis);
  read_opt(node, "bisect_tol", w, n.bisect_tol);
  if (node["box_sizes"]) n.box_sizes = sequence<int>(node["box_sizes"], "numerics.box_sizes");
  read_opt(node, "M_max", w, n.M_max);
  read_opt(node, "M_check", w, n.M_check);
  read_opt(node, "beta", w, n.beta);
  read_opt(node, "scan_step", w, n.scan_step);
  read_opt(node, "root_tol", w, n.root_tol);
  read_opt(node, "edge_margin", w, n.edge_margin);
  if (node["window"]) {
    const auto win = sequence<double>(node["window"], "numerics.window");
    if (win.size() != 2) throw ConfigError("numerics.window must be [min, max]");
    n.window_min = win[0];
    n.window_max = win[1];
  }
  read_opt(node, "threads", w, n.threads);
  return n;
}

inline OutputSpec parse_output(const YAML::Node& node) {
  reject_unknown(node, "output", {"directory", "formats"});
  OutputSpec o;
  read_opt(node, "directory", "output", o.directory);
  if (node["formats"]) o.formats = sequence<std::string>(node["formats"], "output.formats");
  return o;
}

inline void positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
}

}  // namespace detail

/// Re-checks every invariant the library relies on. Structural problems raise
/// ConfigError; the arithmetic condition on omega and phi raises
/// ArithmeticClash from ModelParams::validate.
inline void validate(const RunConfig& c) {
  const ModelParams& m = c.model;
  if (m.d1 < 1 || m.d1 > kMaxGreenDimension)
    throw ConfigError("model.d1 must be between 1 and " + std::to_string(kMaxGreenDimension));
  if (m.d2 < 1 || m.d2 > 3) throw ConfigError("model.d2 must be between 1 and 3");
  if (static_cast<int>(m.omega.size()) != m.d2) throw ConfigError("model.omega must have d2 entries");
  if (!std::isfinite(m.g) || m.g == 0.0) throw ConfigError("model.g must be finite and nonzero");

  try {
    (void)c.potential.build();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }

  const Numerics& n = c.numerics;
  detail::positive(n.ode_tol, "numerics.ode_tol");
  detail::positive(n.bisect_tol, "numerics.bisect_tol");
  detail::positive(n.beta, "numerics.beta");
  detail::positive(n.scan_step, "numerics.scan_step");
  detail::positive(n.root_tol, "numerics.root_tol");
  if (!(n.edge_margin >= 0.0)) throw ConfigError("numerics.edge_margin must be non-negative");
  if (n.quad_points_per_axis < 4) throw ConfigError("numerics.quad_points_per_axis must be at least 4");
  if (n.green_points_per_axis != 0 && n.green_points_per_axis < 4)
    throw ConfigError("numerics.green_points_per_axis must be 0 (default) or at least 4");
  if (n.box_sizes.empty()) throw ConfigError("numerics.box_sizes must not be empty");
  for (int L : n.box_sizes) {
    if (L < 0) throw ConfigError("numerics.box_sizes entries must be non-negative");
    if (box_size(m.d2, L) > kDenseBoxCap)
      throw ConfigError("numerics.box_sizes: box " + std::to_string(L) + " exceeds the dense cap of " +
                        std::to_string(kDenseBoxCap) + " sites");
  }
  if (n.M_max < 0) throw ConfigError("numerics.M_max must be non-negative");
  if (n.M_check < 1) throw ConfigError("numerics.M_check must be positive");
  if (!std::isfinite(n.window_min) || !std::isfinite(n.window_max) || !(n.window_min < n.window_max))
    throw ConfigError("numerics.window must be finite with min < max");
  if (n.threads < 1) throw ConfigError("numerics.threads must be at least 1");
  try {
    (void)TorusGrid(m.d2, n.quad_points_per_axis);
    if (n.green_points_per_axis > 0) (void)TorusGrid(m.d1, n.green_points_per_axis);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }

  if (c.output.directory.empty()) throw ConfigError("output.directory must not be empty");
  for (const auto& f : c.output.formats)
    if (f != "csv" && f != "json") throw ConfigError("output.formats: unknown format '" + f + "'");

  m.validate(n.M_check);
}

inline RunConfig parse_config(const YAML::Node& root) {
  if (!root || !root.IsMap()) throw ConfigError("config: top level must be a mapping");
  detail::reject_unknown(root, "config", {"model", "potential", "numerics", "output"});
  if (!root["model"]) throw ConfigError("config: 'model' section is required");
  RunConfig c;
  c.model = detail::parse_model(root["model"]);
  if (root["potential"]) c.potential = detail::parse_potential(root["potential"]);
  if (root["numerics"]) c.numerics = detail::parse_numerics(root["numerics"]);
  if (root["output"]) c.output = detail::parse_output(root["output"]);
  validate(c);
  return c;
}

inline RunConfig load_config_string(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse_config(root);
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return load_config_string(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

/// Full config, defaults included, in a form load_config_string accepts back
/// (JSON is a subset of YAML).
inline nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["model"] = {{"d1", c.model.d1},
                {"d2", c.model.d2},
                {"g", c.model.g},
                {"omega", c.model.omega},
                {"phi", c.model.phi}};
  nlohmann::ordered_json pot = {{"kind", c.potential.kind}};
  if (c.potential.kind == "constant") pot["value"] = c.potential.value;
  if (c.potential.kind == "piecewise") {
    pot["breakpoints"] = c.potential.breakpoints;
    pot["values"] = c.potential.values;
  }
  j["potential"] = pot;
  const Numerics& n = c.numerics;
  j["numerics"] = {{"ode_tol", n.ode_tol},
                   {"quad_points_per_axis", n.quad_points_per_axis},
                   {"green_points_per_axis", n.green_points_per_axis},
                   {"bisect_tol", n.bisect_tol},
                   {"box_sizes", n.box_sizes},
                   {"M_max", n.M_max},
                   {"M_check", n.M_check},
                   {"beta", n.beta},
                   {"scan_step", n.scan_step},
                   {"root_tol", n.root_tol},
                   {"edge_margin", n.edge_margin},
                   {"window", {n.window_min, n.window_max}},
                   {"threads", n.threads}};
  j["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}};
  return j;
}

}  // namespace maryland::io
