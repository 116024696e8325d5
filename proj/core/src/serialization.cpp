/*
 Copyright 2026 The invlqr Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
// JSON encoding of configurations and dataset bundles.

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "invlqr/data_io.hpp"
#include "invlqr/errors.hpp"

namespace invlqr {
namespace {

using json = nlohmann::json;

// --- helpers ---------------------------------------------------------------

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::vector<std::string> unknown;
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      unknown.push_back(key);
    }
  }
  if (!unknown.empty()) {
    std::string msg = where + ": unknown key(s):";
    for (const std::string& k : unknown) msg += " '" + k + "'";
    throw ConfigError(msg);
  }
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) {
    throw ConfigError(where + ": missing key '" + key + "'");
  }
  return j.at(key);
}

json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

template <class Error>
Eigen::MatrixXd matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw Error(where + ": expected a non-empty array of rows");
  }
  const std::size_t cols = j.front().size();
  Eigen::MatrixXd M(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw Error(where + "[" + std::to_string(i) + "]: expected " +
                  std::to_string(cols) + " numbers");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) {
        throw Error(where + "[" + std::to_string(i) + "][" +
                    std::to_string(c) + "]: not a number");
      }
      M(i, c) = j[i][c].get<double>();
    }
  }
  return M;
}

template <class Error>
Eigen::VectorXd vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw Error(where + ": expected an array of numbers");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw Error(where + "[" + std::to_string(i) + "]: not a number");
    }
    v(i) = j[i].get<double>();
  }
  return v;
}

template <class T>
T get_as(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": wrong type");
  }
}

json parse_text(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line/column.
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::string(what) + ": line " + std::to_string(line) +
                     ", column " + std::to_string(col) + ": " + e.what());
  }
}

// --- plant -----------------------------------------------------------------

json plant_to_json(const PlantSpec& plant) {
  if (const auto* sys = std::get_if<LinearSystem>(&plant)) {
    return {{"type", "lti"}, {"A", matrix_to_json(sys->A())},
            {"B", matrix_to_json(sys->B())}};
  }
  const auto& p = std::get<PendulumParams>(plant);
  return {{"type", "pendulum"}, {"m", p.mass},  {"g", p.gravity},
          {"l", p.length},      {"d", p.damping}, {"tau", p.sample_time}};
}

PlantSpec plant_from_json(const json& j, const std::string& where) {
  const std::string type =
      get_as<std::string>(require(j, "type", where), where + ".type");
  if (type == "lti") {
    reject_unknown_keys(j, {"type", "A", "B"}, where);
    try {
      return LinearSystem(
          matrix_from_json<ConfigError>(require(j, "A", where), where + ".A"),
          matrix_from_json<ConfigError>(require(j, "B", where), where + ".B"));
    } catch (const ArgumentError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  if (type == "pendulum") {
    reject_unknown_keys(j, {"type", "m", "g", "l", "d", "tau"}, where);
    PendulumParams p;
    if (j.contains("m")) p.mass = get_as<double>(j["m"], where + ".m");
    if (j.contains("g")) p.gravity = get_as<double>(j["g"], where + ".g");
    if (j.contains("l")) p.length = get_as<double>(j["l"], where + ".l");
    if (j.contains("d")) p.damping = get_as<double>(j["d"], where + ".d");
    if (j.contains("tau")) p.sample_time = get_as<double>(j["tau"], where + ".tau");
    return p;
  }
  throw ConfigError(where + ".type: unknown plant type '" + type +
                    "' (expected lti|pendulum)");
}

// --- ioc -------------------------------------------------------------------

json ioc_to_json(const IocConfig& c) {
  return {{"structure", to_string(c.structure)},
          {"r_structure", to_string(c.r_structure)},
          {"normalization", to_string(c.normalization)},
          {"restarts", c.restarts},
          {"max_iterations", c.max_iterations},
          {"objective_tolerance", c.objective_tolerance},
          {"gradient_tolerance", c.gradient_tolerance},
          {"gradient_mode", to_string(c.gradient_mode)},
          {"seed", c.seed}};
}

IocConfig ioc_from_json(const json& j, const std::string& where) {
  reject_unknown_keys(j,
                      {"structure", "r_structure", "normalization", "restarts",
                       "max_iterations", "objective_tolerance",
                       "gradient_tolerance", "gradient_mode", "seed"},
                      where);
  IocConfig c;
  if (j.contains("structure")) {
    c.structure = parse_structure(get_as<std::string>(j["structure"], where));
  }
  if (j.contains("r_structure")) {
    c.r_structure = parse_structure(get_as<std::string>(j["r_structure"], where));
  }
  if (j.contains("normalization")) {
    c.normalization =
        parse_normalization(get_as<std::string>(j["normalization"], where));
  }
  if (j.contains("gradient_mode")) {
    c.gradient_mode =
        parse_gradient_mode(get_as<std::string>(j["gradient_mode"], where));
  }
  if (j.contains("restarts")) c.restarts = get_as<int>(j["restarts"], where + ".restarts");
  if (j.contains("max_iterations")) {
    c.max_iterations = get_as<int>(j["max_iterations"], where + ".max_iterations");
  }
  if (j.contains("objective_tolerance")) {
    c.objective_tolerance =
        get_as<double>(j["objective_tolerance"], where + ".objective_tolerance");
  }
  if (j.contains("gradient_tolerance")) {
    c.gradient_tolerance =
        get_as<double>(j["gradient_tolerance"], where + ".gradient_tolerance");
  }
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j["seed"], where + ".seed");
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Experiment configuration

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = parse_text(json_text, "config");
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  reject_unknown_keys(j, {"plant", "controller", "sampling", "ioc"}, "config");

  ExperimentConfig cfg;
  cfg.plant = plant_from_json(require(j, "plant", "config"), "plant");

  const json& c = require(j, "controller", "config");
  reject_unknown_keys(c, {"type", "horizon", "Q", "R", "reference", "nmpc"},
                      "controller");
  const std::string type =
      c.contains("type") ? get_as<std::string>(c["type"], "controller.type")
                         : "mpc";
  if (type == "mpc") {
    cfg.controller.kind = ControllerKind::kMpc;
  } else if (type == "lqr") {
    cfg.controller.kind = ControllerKind::kLqr;
  } else {
    throw ConfigError("controller.type: unknown controller '" + type +
                      "' (expected mpc|lqr)");
  }
  if (c.contains("horizon")) {
    cfg.controller.horizon = get_as<int>(c["horizon"], "controller.horizon");
  }
  cfg.controller.weights.Q =
      matrix_from_json<ConfigError>(require(c, "Q", "controller"), "controller.Q");
  cfg.controller.weights.R =
      matrix_from_json<ConfigError>(require(c, "R", "controller"), "controller.R");
  if (c.contains("reference")) {
    const json& r = c["reference"];
    reject_unknown_keys(r, {"theta_bar"}, "controller.reference");
    if (r.contains("theta_bar")) {
      cfg.controller.theta_bar =
          get_as<double>(r["theta_bar"], "controller.reference.theta_bar");
    }
  }
  if (c.contains("nmpc")) {
    const json& o = c["nmpc"];
    reject_unknown_keys(o, {"max_iterations", "stationarity_tolerance"},
                        "controller.nmpc");
    if (o.contains("max_iterations")) {
      cfg.controller.nmpc.max_iterations =
          get_as<int>(o["max_iterations"], "controller.nmpc.max_iterations");
    }
    if (o.contains("stationarity_tolerance")) {
      cfg.controller.nmpc.stationarity_tolerance = get_as<double>(
          o["stationarity_tolerance"], "controller.nmpc.stationarity_tolerance");
    }
  }

  const json& s = require(j, "sampling", "config");
  reject_unknown_keys(s,
                      {"M", "N", "x0_bounds", "noise_std", "reference_std",
                       "seed"},
                      "sampling");
  cfg.sampling.M = get_as<int>(require(s, "M", "sampling"), "sampling.M");
  cfg.sampling.N = get_as<int>(require(s, "N", "sampling"), "sampling.N");
  const Eigen::MatrixXd bounds = matrix_from_json<ConfigError>(
      require(s, "x0_bounds", "sampling"), "sampling.x0_bounds");
  if (bounds.cols() != 2) {
    throw ConfigError("sampling.x0_bounds: each entry must be [lower, upper]");
  }
  for (Eigen::Index i = 0; i < bounds.rows(); ++i) {
    cfg.sampling.x0_bounds.push_back({bounds(i, 0), bounds(i, 1)});
  }
  if (s.contains("noise_std")) {
    cfg.sampling.noise_std = get_as<double>(s["noise_std"], "sampling.noise_std");
  }
  if (s.contains("reference_std")) {
    cfg.sampling.reference_std =
        get_as<double>(s["reference_std"], "sampling.reference_std");
  }
  if (s.contains("seed")) {
    cfg.sampling.seed = get_as<std::uint64_t>(s["seed"], "sampling.seed");
  }

  if (j.contains("ioc")) cfg.ioc = ioc_from_json(j["ioc"], "ioc");
  cfg.validate();
  return cfg;
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  json bounds = json::array();
  for (const Interval& iv : cfg.sampling.x0_bounds) {
    bounds.push_back({iv.lower, iv.upper});
  }
  json controller = {
      {"type", cfg.controller.kind == ControllerKind::kMpc ? "mpc" : "lqr"},
      {"horizon", cfg.controller.horizon},
      {"Q", matrix_to_json(cfg.controller.weights.Q)},
      {"R", matrix_to_json(cfg.controller.weights.R)},
      {"nmpc",
       {{"max_iterations", cfg.controller.nmpc.max_iterations},
        {"stationarity_tolerance", cfg.controller.nmpc.stationarity_tolerance}}}};
  if (std::holds_alternative<PendulumParams>(cfg.plant)) {
    controller["reference"] = {{"theta_bar", cfg.controller.theta_bar}};
  }
  const json j = {{"plant", plant_to_json(cfg.plant)},
                  {"controller", controller},
                  {"sampling",
                   {{"M", cfg.sampling.M},
                    {"N", cfg.sampling.N},
                    {"x0_bounds", bounds},
                    {"noise_std", cfg.sampling.noise_std},
                    {"reference_std", cfg.sampling.reference_std},
                    {"seed", cfg.sampling.seed}}},
                  {"ioc", ioc_to_json(cfg.ioc)}};
  return j.dump(2) + "\n";
}

IocConfig parse_ioc_config(const std::string& json_text) {
  json j;
  try {
    j = parse_text(json_text, "ioc config");
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  // Accept either a bare IocConfig or a full experiment config.
  if (j.is_object() && j.contains("ioc") && j.contains("plant")) {
    return ioc_from_json(j["ioc"], "ioc");
  }
  return ioc_from_json(j, "ioc");
}

// ---------------------------------------------------------------------------
// Dataset bundle

std::string dataset_to_json(const Dataset& data) {
  json op = nullptr;
  if (data.meta.operating_point) {
    op = {{"x_bar", vector_to_json(data.meta.operating_point->x_bar)},
          {"u_bar", vector_to_json(data.meta.operating_point->u_bar)}};
  }
  json trajs = json::array();
  for (const Trajectory& t : data.trajectories) {
    trajs.push_back({{"states", matrix_to_json(t.states.transpose())},
                     {"inputs", matrix_to_json(t.inputs.transpose())}});
  }
  const json j = {
      {"meta",
       {{"plant_id", plant_id(data.meta.plant)},
        {"plant", plant_to_json(data.meta.plant)},
        {"controller_id", data.meta.controller_id},
        {"seed", data.meta.seed},
        {"noise_std", data.meta.noise_std},
        {"operating_point", op},
        {"deviation_coordinates", data.meta.deviation_coordinates},
        {"created", data.meta.created}}},
      {"trajectories", trajs}};
  return j.dump() + "\n";
}

Dataset dataset_from_json(const std::string& json_text) {
  const json j = parse_text(json_text, "dataset");
  Dataset data;
  try {
    if (!j.is_object() || !j.contains("meta") || !j.contains("trajectories")) {
      throw ParseError("dataset: expected keys 'meta' and 'trajectories'");
    }
    const json& meta = j["meta"];
    if (!meta.is_object()) throw ParseError("dataset.meta: expected an object");
    try {
      data.meta.plant = plant_from_json(meta.at("plant"), "meta.plant");
    } catch (const ConfigError& e) {
      throw ParseError(std::string("dataset: ") + e.what());
    }
    data.meta.controller_id = meta.at("controller_id").get<std::string>();
    data.meta.seed = meta.at("seed").get<std::uint64_t>();
    data.meta.noise_std = meta.at("noise_std").get<double>();
    if (meta.contains("operating_point") && !meta["operating_point"].is_null()) {
      const json& op = meta["operating_point"];
      data.meta.operating_point = OperatingPoint{
          vector_from_json<ParseError>(op.at("x_bar"), "meta.operating_point.x_bar"),
          vector_from_json<ParseError>(op.at("u_bar"), "meta.operating_point.u_bar")};
    }
    if (meta.contains("deviation_coordinates")) {
      data.meta.deviation_coordinates = meta["deviation_coordinates"].get<bool>();
    }
    if (meta.contains("created")) {
      data.meta.created = meta["created"].get<std::string>();
    }

    const json& trajs = j["trajectories"];
    if (!trajs.is_array()) throw ParseError("dataset.trajectories: expected an array");
    const int n = state_dim(data.meta.plant);
    const int m = input_dim(data.meta.plant);
    for (std::size_t i = 0; i < trajs.size(); ++i) {
      const std::string where = "trajectories[" + std::to_string(i) + "]";
      const json& t = trajs[i];
      if (!t.is_object() || !t.contains("states") || !t.contains("inputs")) {
        throw ParseError(where + ": expected keys 'states' and 'inputs'");
      }
      Trajectory traj;
      traj.states =
          matrix_from_json<ParseError>(t["states"], where + ".states").transpose();
      traj.inputs = t["inputs"].empty()
                        ? Eigen::MatrixXd(m, 0)
                        : matrix_from_json<ParseError>(t["inputs"], where + ".inputs")
                              .transpose();
      if (traj.states.rows() != n || traj.inputs.rows() != m) {
        throw ValidationError(where + ": samples have " +
                              std::to_string(traj.states.rows()) + " states / " +
                              std::to_string(traj.inputs.rows()) +
                              " inputs, plant has n=" + std::to_string(n) +
                              ", m=" + std::to_string(m));
      }
      data.trajectories.push_back(std::move(traj));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("dataset: ") + e.what());
  }
  data.validate();
  return data;
}

}  // namespace invlqr
