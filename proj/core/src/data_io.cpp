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
#include "invlqr/data_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "invlqr/errors.hpp"
#include "invlqr/rng.hpp"
#include "invlqr/systems.hpp"

namespace invlqr {

// ---------------------------------------------------------------------------
// Dataset

int state_dim(const PlantSpec& plant) {
  if (const auto* sys = std::get_if<LinearSystem>(&plant)) {
    return sys->state_dim();
  }
  return 2;
}

int input_dim(const PlantSpec& plant) {
  if (const auto* sys = std::get_if<LinearSystem>(&plant)) {
    return sys->input_dim();
  }
  return 1;
}

std::string plant_id(const PlantSpec& plant) {
  return std::holds_alternative<LinearSystem>(plant) ? "lti" : "pendulum";
}

int Dataset::state_dim() const {
  return empty() ? invlqr::state_dim(meta.plant)
                 : trajectories.front().state_dim();
}

int Dataset::input_dim() const {
  return empty() ? invlqr::input_dim(meta.plant)
                 : trajectories.front().input_dim();
}

void Dataset::validate() const {
  const int n = invlqr::state_dim(meta.plant);
  const int m = invlqr::input_dim(meta.plant);
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const Trajectory& t = trajectories[i];
    if (t.state_dim() != n || t.input_dim() != m) {
      throw ValidationError("trajectory " + std::to_string(i) + " has n=" +
                            std::to_string(t.state_dim()) + ", m=" +
                            std::to_string(t.input_dim()) +
                            " but the plant has n=" + std::to_string(n) +
                            ", m=" + std::to_string(m));
    }
    try {
      t.validate();
    } catch (const ArgumentError& e) {
      throw ValidationError("trajectory " + std::to_string(i) + ": " +
                            e.what());
    }
  }
  if (meta.operating_point) {
    if (meta.operating_point->x_bar.size() != n ||
        meta.operating_point->u_bar.size() != m) {
      throw ValidationError("operating point does not match the plant");
    }
  }
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  const int n = state_dim(plant);
  const int m = input_dim(plant);
  if (const auto* p = std::get_if<PendulumParams>(&plant)) {
    try {
      p->validate();
    } catch (const ArgumentError& e) {
      throw ConfigError(std::string("plant: ") + e.what());
    }
  }
  try {
    controller.weights.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("controller: ") + e.what());
  }
  if (controller.weights.Q.rows() != n || controller.weights.R.rows() != m) {
    throw ConfigError("controller: Q must be " + std::to_string(n) + "x" +
                      std::to_string(n) + " and R " + std::to_string(m) + "x" +
                      std::to_string(m));
  }
  if (controller.kind == ControllerKind::kMpc && controller.horizon < 1) {
    throw ConfigError("controller: horizon must be >= 1");
  }
  if (controller.kind == ControllerKind::kLqr &&
      !std::holds_alternative<LinearSystem>(plant)) {
    throw ConfigError("controller: type 'lqr' needs an LTI plant");
  }
  if (!std::isfinite(controller.theta_bar)) {
    throw ConfigError("controller: reference.theta_bar must be finite");
  }
  if (sampling.M < 1) throw ConfigError("sampling: M must be >= 1");
  if (sampling.N < 2) throw ConfigError("sampling: N must be >= 2");
  if (static_cast<int>(sampling.x0_bounds.size()) != n) {
    throw ConfigError("sampling: x0_bounds needs " + std::to_string(n) +
                      " intervals, got " +
                      std::to_string(sampling.x0_bounds.size()));
  }
  for (const Interval& iv : sampling.x0_bounds) {
    if (!std::isfinite(iv.lower) || !std::isfinite(iv.upper) ||
        iv.lower > iv.upper) {
      throw ConfigError("sampling: x0_bounds must be finite with lower <= upper");
    }
  }
  if (!(sampling.noise_std >= 0.0) || !std::isfinite(sampling.noise_std) ||
      !(sampling.reference_std >= 0.0) ||
      !std::isfinite(sampling.reference_std)) {
    throw ConfigError("sampling: noise_std and reference_std must be >= 0");
  }
  ioc.validate(m);
}

// ---------------------------------------------------------------------------
// Sampling and generation

std::vector<Eigen::VectorXd> sample_initial_conditions(
    const std::vector<Interval>& bounds, int M, std::uint64_t seed) {
  if (M < 1) throw ArgumentError("sample_initial_conditions: M must be >= 1");
  for (const Interval& iv : bounds) {
    if (!(iv.lower <= iv.upper)) {
      throw ArgumentError("sample_initial_conditions: lower > upper");
    }
  }
  CounterRng rng(seed, streams::kInitialConditions);
  std::vector<Eigen::VectorXd> out;
  out.reserve(M);
  for (int i = 0; i < M; ++i) {
    Eigen::VectorXd x(bounds.size());
    for (std::size_t d = 0; d < bounds.size(); ++d) {
      x(d) = rng.uniform(bounds[d].lower, bounds[d].upper);
    }
    out.push_back(std::move(x));
  }
  return out;
}

OperatingPoint operating_point(const ExperimentConfig& cfg) {
  if (const auto* p = std::get_if<PendulumParams>(&cfg.plant)) {
    return {Eigen::Vector2d(cfg.controller.theta_bar, 0.0),
            Eigen::VectorXd::Constant(
                1, equilibrium_input(*p, cfg.controller.theta_bar))};
  }
  return {Eigen::VectorXd::Zero(state_dim(cfg.plant)),
          Eigen::VectorXd::Zero(input_dim(cfg.plant))};
}

namespace {

std::string controller_id(const ExperimentConfig& cfg) {
  if (cfg.controller.kind == ControllerKind::kLqr) return "lqr";
  const std::string prefix =
      std::holds_alternative<PendulumParams>(cfg.plant) ? "nmpc_T" : "mpc_T";
  return prefix + std::to_string(cfg.controller.horizon);
}

Trajectory simulate_one(const ExperimentConfig& cfg, const Plant& plant,
                        const Eigen::VectorXd& x0, std::uint64_t seed) {
  const SamplingConfig& s = cfg.sampling;
  if (const auto* sys = std::get_if<LinearSystem>(&cfg.plant)) {
    if (cfg.controller.kind == ControllerKind::kLqr) {
      const GainSchedule gains =
          riccati_solve(*sys, cfg.controller.weights, s.N);
      const Policy policy = [&gains](int k, const Eigen::VectorXd& y) {
        return Eigen::VectorXd(-gains.gains[k] * y);
      };
      return simulate_closed_loop(plant, policy, x0, s.N, s.noise_std, seed);
    }
    return simulate_closed_loop(
        plant,
        mpc_policy_lti(*sys, cfg.controller.weights, cfg.controller.horizon),
        x0, s.N, s.noise_std, seed);
  }

  const auto& params = std::get<PendulumParams>(cfg.plant);
  NmpcController nmpc(plant, cfg.controller.weights, cfg.controller.horizon,
                      cfg.controller.nmpc);
  CounterRng reference(seed, streams::kReference);
  const double theta_bar = cfg.controller.theta_bar;
  const double ref_std = s.reference_std;
  const Policy policy = [&](int, const Eigen::VectorXd& y) {
    const double theta_r = theta_bar + ref_std * reference.gaussian();
    const ReferenceSignal ref{
        Eigen::Vector2d(theta_r, 0.0),
        Eigen::VectorXd::Constant(1, equilibrium_input(params, theta_r))};
    return nmpc.step(y, ref);
  };
  return simulate_closed_loop(plant, policy, x0, s.N, s.noise_std, seed);
}

}  // namespace

Dataset generate_dataset(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::unique_ptr<Plant> plant = make_plant(cfg.plant);
  const std::vector<Eigen::VectorXd> x0 = sample_initial_conditions(
      cfg.sampling.x0_bounds, cfg.sampling.M, cfg.sampling.seed);

  Dataset data;
  data.meta.plant = cfg.plant;
  data.meta.controller_id = controller_id(cfg);
  data.meta.seed = cfg.sampling.seed;
  data.meta.noise_std = cfg.sampling.noise_std;
  if (std::holds_alternative<PendulumParams>(cfg.plant)) {
    data.meta.operating_point = operating_point(cfg);
  }
  data.trajectories.reserve(cfg.sampling.M);
  for (int i = 0; i < cfg.sampling.M; ++i) {
    try {
      data.trajectories.push_back(
          simulate_one(cfg, *plant, x0[i], cfg.sampling.seed + i));
    } catch (const DivergenceError& e) {
      throw DivergenceError(i, e.step());
    }
  }
  return data;
}

Dataset to_deviation_coordinates(const Dataset& data,
                                 const OperatingPoint& op) {
  const int n = data.state_dim();
  const int m = data.input_dim();
  if (op.x_bar.size() != n || op.u_bar.size() != m) {
    throw ArgumentError("to_deviation_coordinates: operating point has (" +
                        std::to_string(op.x_bar.size()) + ", " +
                        std::to_string(op.u_bar.size()) +
                        ") entries, data has (" + std::to_string(n) + ", " +
                        std::to_string(m) + ")");
  }
  Dataset out = data;
  for (Trajectory& t : out.trajectories) {
    t.states.colwise() -= op.x_bar;
    t.inputs.colwise() -= op.u_bar;
  }
  out.meta.operating_point = op;
  out.meta.deviation_coordinates = true;
  return out;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trajectories_to_csv(const Dataset& data) {
  const int n = data.state_dim();
  const int m = data.input_dim();
  std::ostringstream os;
  os << "traj_id,k";
  for (int i = 0; i < n; ++i) os << ",x" << i;
  for (int j = 0; j < m; ++j) os << ",u" << j;
  os << '\n';
  for (std::size_t id = 0; id < data.trajectories.size(); ++id) {
    const Trajectory& t = data.trajectories[id];
    for (int k = 0; k < t.length(); ++k) {
      os << id << ',' << k;
      for (int i = 0; i < n; ++i) os << ',' << format_double(t.states(i, k));
      for (int j = 0; j < m; ++j) {
        os << ',';
        if (k + 1 < t.length()) os << format_double(t.inputs(j, k));
      }
      os << '\n';
    }
  }
  return os.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& text, int line, const std::string& col) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ", field '" + col +
                     "': not a number: '" + text + "'");
  }
}

}  // namespace

Dataset trajectories_from_csv(const std::string& csv_text,
                              const DatasetMeta& meta) {
  const int n = state_dim(meta.plant);
  const int m = input_dim(meta.plant);
  std::istringstream is(csv_text);
  std::string line;
  int line_no = 1;
  if (!std::getline(is, line)) throw ParseError("line 1: missing CSV header");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> expected{"traj_id", "k"};
  for (int i = 0; i < n; ++i) expected.push_back("x" + std::to_string(i));
  for (int j = 0; j < m; ++j) expected.push_back("u" + std::to_string(j));
  const std::vector<std::string> header = split_csv_line(line);
  if (header != expected) {
    throw ValidationError("CSV header '" + line + "' does not match n=" +
                          std::to_string(n) + ", m=" + std::to_string(m));
  }
  const std::size_t width = expected.size();

  struct Rows {
    long id;
    std::vector<Eigen::VectorXd> x, u;
    bool closed = false;  // saw the final sample (empty inputs)
  };
  std::vector<Rows> trajs;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() < 2) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected traj_id,k,...");
    }
    const long id = static_cast<long>(parse_number(f[0], line_no, "traj_id"));
    const std::string who = "traj_id " + std::to_string(id) + " (line " +
                            std::to_string(line_no) + ")";
    if (f.size() != width) {
      throw ValidationError(who + ": " + std::to_string(f.size()) +
                            " fields, expected " + std::to_string(width) +
                            " for n=" + std::to_string(n) +
                            ", m=" + std::to_string(m));
    }
    const long k = static_cast<long>(parse_number(f[1], line_no, "k"));
    if (trajs.empty() || trajs.back().id != id) {
      for (const Rows& r : trajs) {
        if (r.id == id) throw ValidationError(who + ": rows not contiguous");
      }
      if (!trajs.empty() && !trajs.back().closed) {
        throw ValidationError("traj_id " + std::to_string(trajs.back().id) +
                              ": final sample must have empty input columns");
      }
      trajs.push_back({id, {}, {}, false});
    }
    Rows& r = trajs.back();
    if (r.closed) throw ValidationError(who + ": samples after the final one");
    if (k != static_cast<long>(r.x.size())) {
      throw ValidationError(who + ": expected k = " + std::to_string(r.x.size()));
    }
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = parse_number(f[2 + i], line_no, expected[2 + i]);
    r.x.push_back(std::move(x));

    int empty_inputs = 0;
    for (int j = 0; j < m; ++j) empty_inputs += f[2 + n + j].empty() ? 1 : 0;
    if (empty_inputs == m) {
      r.closed = true;
    } else if (empty_inputs != 0) {
      throw ValidationError(who + ": " + std::to_string(m - empty_inputs) +
                            " input values, meta says m=" + std::to_string(m));
    } else {
      Eigen::VectorXd u(m);
      for (int j = 0; j < m; ++j) {
        u(j) = parse_number(f[2 + n + j], line_no, expected[2 + n + j]);
      }
      r.u.push_back(std::move(u));
    }
  }
  if (!trajs.empty() && !trajs.back().closed) {
    throw ParseError("line " + std::to_string(line_no) + ": traj_id " +
                     std::to_string(trajs.back().id) +
                     " ends without a final sample (truncated file?)");
  }

  Dataset data;
  data.meta = meta;
  for (const Rows& r : trajs) {
    Trajectory t{Eigen::MatrixXd(n, r.x.size()), Eigen::MatrixXd(m, r.u.size())};
    for (std::size_t k = 0; k < r.x.size(); ++k) t.states.col(k) = r.x[k];
    for (std::size_t k = 0; k < r.u.size(); ++k) t.inputs.col(k) = r.u[k];
    data.trajectories.push_back(std::move(t));
  }
  data.validate();
  return data;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ArgumentError("write failed for '" + path.string() + "'");
}

}  // namespace

void save_trajectories_csv(const Dataset& data,
                           const std::filesystem::path& path) {
  write_file(path, trajectories_to_csv(data));
}

Dataset load_trajectories_csv(const std::filesystem::path& path,
                              const DatasetMeta& meta) {
  return trajectories_from_csv(read_file(path), meta);
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  write_file(path, dataset_to_json(data));
}

Dataset load_dataset(const std::filesystem::path& path) {
  return dataset_from_json(read_file(path));
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  return parse_experiment_config(text);
}

IocConfig load_ioc_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  return parse_ioc_config(text);
}

}  // namespace invlqr
