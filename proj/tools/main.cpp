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
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "invlqr/errors.hpp"
#include "invlqr_cli/commands.hpp"

namespace {

using namespace invlqr;
using namespace invlqr::cli;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invlqr: explain feedback controllers through inverse LQR"};
  app.require_subcommand(1);

  std::string config, dataset, out, csv, case_name, ioc_config;
  std::string structure, r_structure, normalization;
  std::optional<std::uint64_t> seed;
  bool quick = false;
  bool perturb = false;

  auto* gen = app.add_subcommand("generate", "simulate a dataset from a config");
  gen->add_option("--config", config, "experiment config JSON")->required();
  gen->add_option("--out", out, "dataset bundle to write")->required();
  gen->add_option("--csv", csv, "also write the trajectories as CSV");

  auto* exp = app.add_subcommand("explain", "recover (Q, R) from a dataset");
  exp->add_option("--dataset", dataset, "dataset bundle")->required();
  exp->add_option("--config", ioc_config,
                  "IOC config JSON (bare or inside an experiment config)");
  exp->add_option("--out", out, "report JSON to write")->required();
  exp->add_option("--structure", structure, "Q_hat structure")
      ->check(CLI::IsMember({"full", "diagonal"}));
  exp->add_option("--r-structure", r_structure, "R_hat structure")
      ->check(CLI::IsMember({"full", "diagonal"}));
  exp->add_option("--normalization", normalization, "scale fixing")
      ->check(CLI::IsMember({"trace_r", "fix_r_scalar"}));

  auto* rep = app.add_subcommand("reproduce", "run a built-in case study");
  rep->add_option("--case", case_name, "lti_t5, lti_t10, pendulum_upright, "
                                       "pendulum_horizontal")
      ->required();
  rep->add_option("--seed", seed, "seed (default: the case's fixed default seed)");
  rep->add_option("--out", out, "output directory")->required();

  auto* val = app.add_subcommand("validate", "run the property checks");
  val->add_option("--seed", seed, "seed (default 7)");
  val->add_flag("--quick", quick, "noiseless checks only");
  val->add_flag("--perturb-riccati", perturb,
                "inject a fault into the Riccati route");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (*gen) {
    std::optional<std::filesystem::path> csv_path;
    if (!csv.empty()) csv_path = csv;
    return cmd_generate(config, out, csv_path, std::cerr);
  }
  if (*exp) {
    ExplainOverrides ov;
    if (!structure.empty()) ov.structure = parse_structure(structure);
    if (!r_structure.empty()) ov.r_structure = parse_structure(r_structure);
    if (!normalization.empty()) {
      ov.normalization = parse_normalization(normalization);
    }
    std::optional<std::filesystem::path> cfg_path;
    if (!ioc_config.empty()) cfg_path = ioc_config;
    return cmd_explain(dataset, cfg_path, out, ov, std::cerr);
  }
  if (*rep) {
    Case c;
    try {
      c = parse_case(case_name);
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitInput;
    }
    return cmd_reproduce(c, seed.value_or(default_seed(c)), out, std::cerr);
  }
  ValidateOptions opts;
  opts.seed = seed.value_or(opts.seed);
  opts.quick = quick;
  opts.perturb_riccati = perturb;
  return cmd_validate(opts, std::cout, std::cerr);
}
