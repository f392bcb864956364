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

// The simulate / fit / plan / report pipeline behind the avplan tool.
//
// Outputs, all under config.paths.out unless a path overrides them:
//   simulate: events.csv, mileage.csv, simulation.json
//   fit:      draws.csv, fit.json
//   plan:     results.csv, front.csv, front.svg (optional)
//   report:   front.svg (optional); summary on stdout

#ifndef AVPLAN_COMMANDS_H_
#define AVPLAN_COMMANDS_H_

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>

#include "avplan/config.h"

namespace avplan {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitInfeasible = 3,
};

int run_simulate(const RunConfig& config, std::ostream& log);
int run_fit(const RunConfig& config, std::ostream& log);
int run_plan(const RunConfig& config, bool write_svg, std::ostream& log);
int run_report(const RunConfig& config, bool write_svg, std::ostream& log);

// Runs a command, mapping exceptions onto the exit-status contract:
// ConfigError / invalid arguments -> 1, data and I/O errors -> 2.
int run_guarded(const std::function<int()>& command, std::ostream& err);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace avplan

#endif  // AVPLAN_COMMANDS_H_
