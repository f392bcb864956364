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

#include "avplan/config.h"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>

#include "avplan/error.h"
#include "json.hpp"

namespace avplan {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::string_view where,
                    std::initializer_list<std::string_view> known) {
  if (!obj.is_object()) {
    throw ConfigError(fmt::format("config: '{}' must be an object", where));
  }
  for (const auto& [key, value] : obj.items()) {
    bool found = false;
    for (auto k : known) found = found || key == k;
    if (!found) {
      throw ConfigError(fmt::format("config: unknown key '{}' in {}", key, where));
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end() && !it->is_null()) {
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(fmt::format("config: bad value for '{}': {}", key, e.what()));
    }
  }
}

std::array<double, 3> triple(const json& obj, const char* key,
                             std::array<double, 3> fallback) {
  read(obj, key, fallback);
  return fallback;
}

}  // namespace

void RunConfig::validate() const {
  try {
    if (!(tau_h > 0.0)) {
      throw std::invalid_argument(fmt::format("tau_h must be > 0, got {}", tau_h));
    }
    grid.validate();
    constraints.validate();
    prior.validate();
    mcmc.validate();
    simulation.theta.validate();
    if (requirement) requirement->validate();
    if (mileage) mileage->validate();
    if (priority) priority->validate();
    if (grid.model == ProcessModel::kNhpp) {
      StudyWindows{tau_h, grid.tau_t.max, tau_d}.validate();
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("config: {}", e.what()));
  }
  if (n_post < 1) throw ConfigError("config: n_post must be >= 1");
  if (simulation.n_units < 1) throw ConfigError("config: simulation.n_units must be >= 1");
  if (!(simulation.daily_kmiles >= 0.0)) {
    throw ConfigError("config: simulation.daily_kmiles must be >= 0");
  }
}

std::filesystem::path RunConfig::events_path() const {
  return paths.events.empty() ? paths.out / "events.csv" : paths.events;
}

std::filesystem::path RunConfig::mileage_path() const {
  return paths.mileage.empty() ? paths.out / "mileage.csv" : paths.mileage;
}

std::filesystem::path RunConfig::draws_path() const {
  return paths.draws.empty() ? paths.out / "draws.csv" : paths.draws;
}

RiskSetting RunConfig::risk_setting() const {
  if (!requirement) throw ConfigError("config: 'requirement' (m0, m1) is required");
  if (!mileage) throw ConfigError("config: 'mileage' (x_t, x_d) is required");
  return RiskSetting{grid.model, tau_h, tau_d, *requirement, *mileage};
}

RunConfig parse_run_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config: invalid JSON: {}", e.what()));
  }
  reject_unknown(doc, "config",
                 {"study_start", "seed", "windows", "requirement", "mileage",
                  "model", "grid", "constraints", "priority", "prior", "mcmc",
                  "n_post", "simulation", "paths"});

  RunConfig cfg;
  if (auto it = doc.find("study_start"); it != doc.end()) {
    try {
      cfg.study_start = parse_iso_date(it->get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(fmt::format("config: study_start: {}", e.what()));
    }
  }
  read(doc, "seed", cfg.seed);
  read(doc, "n_post", cfg.n_post);

  if (auto it = doc.find("windows"); it != doc.end()) {
    reject_unknown(*it, "windows", {"tau_h", "tau_d"});
    read(*it, "tau_h", cfg.tau_h);
    read(*it, "tau_d", cfg.tau_d);
  }
  if (auto it = doc.find("requirement"); it != doc.end() && !it->is_null()) {
    reject_unknown(*it, "requirement", {"m0", "m1"});
    ReliabilityRequirement req;
    read(*it, "m0", req.m0);
    read(*it, "m1", req.m1);
    cfg.requirement = req;
  }
  if (auto it = doc.find("mileage"); it != doc.end() && !it->is_null()) {
    reject_unknown(*it, "mileage", {"x_t", "x_d"});
    MileageAssumption m;
    read(*it, "x_t", m.x_t);
    read(*it, "x_d", m.x_d);
    cfg.mileage = m;
  }
  if (auto it = doc.find("model"); it != doc.end()) {
    try {
      cfg.grid.model = parse_process_model(it->get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(fmt::format("config: model: {}", e.what()));
    }
  }
  if (auto it = doc.find("grid"); it != doc.end()) {
    reject_unknown(*it, "grid", {"n_t", "tau_t", "c_max"});
    read(*it, "n_t", cfg.grid.n_t_values);
    read(*it, "c_max", cfg.grid.c_max);
    if (auto t = it->find("tau_t"); t != it->end()) {
      reject_unknown(*t, "grid.tau_t", {"min", "max", "step"});
      read(*t, "min", cfg.grid.tau_t.min);
      read(*t, "max", cfg.grid.tau_t.max);
      read(*t, "step", cfg.grid.tau_t.step);
    }
  }
  if (auto it = doc.find("constraints"); it != doc.end()) {
    reject_unknown(*it, "constraints", {"alpha_c", "alpha_p"});
    read(*it, "alpha_c", cfg.constraints.alpha_c);
    if (auto p = it->find("alpha_p"); p != it->end() && !p->is_null()) {
      double v = 0.0;
      read(*it, "alpha_p", v);
      cfg.constraints.alpha_p = v;
    }
  }
  if (auto it = doc.find("priority"); it != doc.end() && !it->is_null()) {
    reject_unknown(*it, "priority", {"kind", "threshold"});
    PriorityRule rule;
    std::string kind = std::string(to_string(rule.kind));
    read(*it, "kind", kind);
    try {
      rule.kind = parse_priority_kind(kind);
    } catch (const std::exception& e) {
      throw ConfigError(fmt::format("config: priority: {}", e.what()));
    }
    read(*it, "threshold", rule.threshold);
    cfg.priority = rule;
  }
  if (auto it = doc.find("prior"); it != doc.end()) {
    reject_unknown(*it, "prior", {"mean", "sd"});
    cfg.prior.mean = triple(*it, "mean", cfg.prior.mean);
    cfg.prior.sd = triple(*it, "sd", cfg.prior.sd);
  }
  if (auto it = doc.find("mcmc"); it != doc.end()) {
    reject_unknown(*it, "mcmc", {"burn_in", "thin", "chains", "target_acceptance"});
    read(*it, "burn_in", cfg.mcmc.burn_in);
    read(*it, "thin", cfg.mcmc.thin);
    read(*it, "chains", cfg.mcmc.chains);
    read(*it, "target_acceptance", cfg.mcmc.target_acceptance);
  }
  if (auto it = doc.find("simulation"); it != doc.end()) {
    reject_unknown(*it, "simulation", {"theta", "n_units", "daily_kmiles"});
    const auto& s = cfg.simulation;
    const auto theta = triple(*it, "theta", {s.theta.theta1, s.theta.theta2, s.theta.theta3});
    cfg.simulation.theta = WeibullGrowthParams{theta[0], theta[1], theta[2]};
    read(*it, "n_units", cfg.simulation.n_units);
    read(*it, "daily_kmiles", cfg.simulation.daily_kmiles);
  }
  if (auto it = doc.find("paths"); it != doc.end()) {
    reject_unknown(*it, "paths", {"events", "mileage", "draws", "out"});
    std::string s;
    auto path = [&](const char* key, std::filesystem::path& out) {
      s.clear();
      read(*it, key, s);
      if (!s.empty()) out = s;
    };
    path("events", cfg.paths.events);
    path("mileage", cfg.paths.mileage);
    path("draws", cfg.paths.draws);
    path("out", cfg.paths.out);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace avplan
