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

// Run configuration for the avplan command-line tool. The on-disk form is a
// JSON document; every field is optional and falls back to the defaults
// below, except that `plan` needs a requirement and a mileage assumption.
//
//   {
//     "study_start": "2017-12-01",
//     "seed": 1,
//     "windows":      {"tau_h": 730, "tau_d": 730},
//     "requirement":  {"m0": 0.013, "m1": 0.016},
//     "mileage":      {"x_t": 0.21, "x_d": 0.21},
//     "model": "hpp",
//     "grid": {"n_t": [10], "tau_t": {"min": 20, "max": 365, "step": 1},
//              "c_max": 50},
//     "constraints": {"alpha_c": 0.086, "alpha_p": null},
//     "priority":    {"kind": "max_pr_threshold", "threshold": 0.1},
//     "prior": {"mean": [1, 0.01, 1], "sd": [100, 10, 10]},
//     "mcmc":  {"burn_in": 10000, "thin": 100, "chains": 4,
//               "target_acceptance": 0.3},
//     "n_post": 1001,
//     "simulation": {"theta": [2.0, 0.005, 1.2], "n_units": 20,
//                    "daily_kmiles": 0.2},
//     "paths": {"events": "events.csv", "mileage": "mileage.csv",
//               "draws": "draws.csv", "out": "out"}
//   }

#ifndef AVPLAN_CONFIG_H_
#define AVPLAN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "avplan/bayes.h"
#include "avplan/events.h"
#include "avplan/planner.h"

namespace avplan {

struct SimulationSettings {
  WeibullGrowthParams theta{2.0, 0.005, 1.2};
  std::size_t n_units = 20;
  double daily_kmiles = 0.2;
};

struct RunPaths {
  // Empty means "<out>/<default file name>".
  std::filesystem::path events;
  std::filesystem::path mileage;
  std::filesystem::path draws;
  std::filesystem::path out = "out";
};

struct RunConfig {
  Date study_start{std::chrono::year{2017}, std::chrono::month{12},
                   std::chrono::day{1}};
  std::uint64_t seed = 1;
  double tau_h = 730.0;
  double tau_d = 730.0;
  std::optional<ReliabilityRequirement> requirement;
  std::optional<MileageAssumption> mileage;
  PlanGrid grid{ProcessModel::kHpp, {10}, DayRange{20.0, 365.0, 1.0}, 50};
  ConstraintSpec constraints;
  std::optional<PriorityRule> priority;
  NormalPrior prior;
  McmcConfig mcmc;
  std::size_t n_post = 1001;
  SimulationSettings simulation;
  RunPaths paths;

  // Throws ConfigError on inconsistent settings.
  void validate() const;
  std::filesystem::path events_path() const;
  std::filesystem::path mileage_path() const;
  std::filesystem::path draws_path() const;
  RiskSetting risk_setting() const;  // requires requirement and mileage
};

// Parses the JSON form. Unknown keys are rejected. Throws ConfigError.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace avplan

#endif  // AVPLAN_CONFIG_H_
