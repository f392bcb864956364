// Copyright 2026 The avplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// avplan: assurance test planning for recurrent-events reliability data.
//
//   avplan simulate --config run.json [--seed N] [--out DIR]
//   avplan fit      --config run.json [--seed N] [--out DIR]
//   avplan plan     --config run.json [--draws PATH] [--model hpp|nhpp] [--svg]
//   avplan report   --config run.json [--out DIR] [--svg]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "avplan/error.h"
#include "avplan/commands.h"
#include "avplan/config.h"
#include "avplan/risk.h"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string draws;
  std::string out;
  std::string model;
  bool svg = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "run configuration (JSON)");
  cmd->add_option("--seed", f.seed, "random seed (overrides config)");
  cmd->add_option("--out", f.out, "output directory (overrides config)");
}

avplan::RunConfig resolve(const Flags& f) {
  avplan::RunConfig cfg =
      f.config.empty() ? avplan::RunConfig{} : avplan::load_run_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (!f.out.empty()) cfg.paths.out = f.out;
  if (!f.draws.empty()) cfg.paths.draws = f.draws;
  if (!f.model.empty()) {
    try {
      cfg.grid.model = avplan::parse_process_model(f.model);
    } catch (const std::invalid_argument& e) {
      throw avplan::ConfigError(e.what());
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian assurance test planning for recurrent-events data"};
  app.require_subcommand(1);
  Flags flags;

  auto* simulate = app.add_subcommand("simulate", "simulate an events/mileage dataset");
  auto* fit = app.add_subcommand("fit", "fit the posterior and write draws");
  auto* plan = app.add_subcommand("plan", "evaluate a plan grid and its Pareto front");
  auto* report = app.add_subcommand("report", "summarize a previous plan run");
  for (auto* cmd : {simulate, fit, plan, report}) add_common(cmd, flags);
  plan->add_option("--draws", flags.draws, "posterior draws CSV");
  plan->add_option("--model", flags.model, "hpp or nhpp")
      ->check(CLI::IsMember({"hpp", "nhpp"}));
  plan->add_flag("--svg", flags.svg, "also write front.svg");
  report->add_flag("--svg", flags.svg, "also write front.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? avplan::kExitOk : avplan::kExitUsage;
  }

  return avplan::run_guarded(
      [&] {
        const auto cfg = resolve(flags);
        if (*simulate) return avplan::run_simulate(cfg, std::cout);
        if (*fit) return avplan::run_fit(cfg, std::cout);
        if (*plan) return avplan::run_plan(cfg, flags.svg, std::cout);
        return avplan::run_report(cfg, flags.svg, std::cout);
      },
      std::cerr);
}
