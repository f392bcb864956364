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

#include "avplan/commands.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "avplan/error.h"
#include "avplan/svg.h"
#include "json.hpp"

namespace avplan {
namespace {

using nlohmann::json;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void print_front(const std::vector<RiskProfile>& front, std::ostream& log) {
  fmt::print(log, "{:>4} {:>4} {:>8} {:>9} {:>8} {:>8} {:>8}\n", "c", "n_t",
             "tau_t", "cost", "CR", "PR", "AP");
  for (const auto& p : front) {
    fmt::print(log, "{:>4} {:>4} {:>8} {:>9} {:>8.4f} {:>8.4f} {:>8.4f}\n",
               p.plan.c, p.plan.n_t, p.plan.tau_t, p.cost, p.cr, p.pr, p.ap);
  }
}

void print_selection(const RunConfig& config, const std::vector<RiskProfile>& front,
                     std::ostream& log) {
  if (!config.priority || front.empty()) return;
  const auto sel = select_plan(front, *config.priority);
  if (!sel.choice) {
    fmt::print(log, "selection: {}\n", sel.explanation);
    return;
  }
  const auto& p = *sel.choice;
  fmt::print(log,
             "selection ({}): n_t={} tau_t={} c={} cost={} -> CR={:.4f} "
             "PR={:.4f} AP={:.4f}\n",
             sel.explanation, p.plan.n_t, p.plan.tau_t, p.plan.c, p.cost, p.cr,
             p.pr, p.ap);
}

std::string front_title(ProcessModel model, const ConstraintSpec& spec) {
  return fmt::format("{} Pareto front (CR <= {})",
                     model == ProcessModel::kHpp ? "HPP" : "NHPP", spec.alpha_c);
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) {
    throw DataError(fmt::format("cannot write '{}'", path.string()));
  }
}

int run_simulate(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto days = horizon_day_count(config.tau_h);
  const MileageProfile mileage_template{
      "template", std::vector<double>(days, config.simulation.daily_kmiles)};
  const auto data =
      simulate_nhpp(config.simulation.theta, mileage_template,
                    config.simulation.n_units, config.tau_h, config.seed);

  write_text_file(config.events_path(), write_events_csv(data, config.study_start));
  write_text_file(config.mileage_path(), write_mileage_csv(data, config.study_start));
  const auto& theta = config.simulation.theta;
  json meta = {
      {"theta", {theta.theta1, theta.theta2, theta.theta3}},
      {"n_units", config.simulation.n_units},
      {"daily_kmiles", config.simulation.daily_kmiles},
      {"tau_h", config.tau_h},
      {"study_start", format_iso_date(config.study_start)},
      {"seed", config.seed},
      {"total_events", data.total_events()},
  };
  write_text_file(config.paths.out / "simulation.json", meta.dump(2) + "\n");
  fmt::print(log, "simulated {} units, {} events -> {}, {}\n", data.units.size(),
             data.total_events(), config.events_path().string(),
             config.mileage_path().string());
  return kExitOk;
}

int run_fit(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto data = parse_events(read_text_file(config.events_path()),
                                 read_text_file(config.mileage_path()),
                                 config.tau_h, config.study_start);
  const auto fit =
      fit_posterior(data, config.prior, config.n_post, config.seed, config.mcmc);
  write_text_file(config.draws_path(), save_draws(fit.draws));

  std::array<std::vector<double>, 3> comp;
  for (const auto& d : fit.draws.draws) {
    comp[0].push_back(d.theta1);
    comp[1].push_back(d.theta2);
    comp[2].push_back(d.theta3);
  }
  const std::array<double, 3> med{median(comp[0]), median(comp[1]), median(comp[2])};
  json meta = {
      {"n_post", fit.draws.size()},
      {"acceptance_rate", fit.acceptance_rate},
      {"split_rhat", fit.split_rhat},
      {"converged", fit.converged},
      {"posterior_median", med},
      {"warnings", fit.warnings},
      {"provenance", fit.draws.provenance},
  };
  write_text_file(config.paths.out / "fit.json", meta.dump(2) + "\n");

  fmt::print(log, "fitted {} units ({} events): {} draws -> {}\n", data.units.size(),
             data.total_events(), fit.draws.size(), config.draws_path().string());
  fmt::print(log, "acceptance rate {:.3f}; split-Rhat {:.4f} {:.4f} {:.4f}\n",
             fit.acceptance_rate, fit.split_rhat[0], fit.split_rhat[1],
             fit.split_rhat[2]);
  fmt::print(log, "posterior medians theta = ({:.6g}, {:.6g}, {:.6g})\n", med[0],
             med[1], med[2]);
  for (const auto& w : fit.warnings) fmt::print(log, "warning: {}\n", w);
  return kExitOk;
}

int run_plan(const RunConfig& config, bool write_svg, std::ostream& log) {
  config.validate();
  const auto setting = config.risk_setting();
  const auto draws = load_draws(read_text_file(config.draws_path()));
  const auto plans = enumerate_plans(config.grid);
  const auto profiles = evaluate_grid(plans, draws, setting);
  const auto rows = classify_plans(profiles, config.constraints);

  std::vector<PlanRow> front_rows;
  std::vector<RiskProfile> front;
  std::size_t feasible = 0;
  for (const auto& row : rows) {
    feasible += row.feasible ? 1 : 0;
    if (row.on_front) front_rows.push_back(row);
  }
  // Front rows in front order (c, then cost).
  std::sort(front_rows.begin(), front_rows.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(a.profile.plan.c, a.profile.cost, a.profile.plan.n_t,
                           a.profile.plan.tau_t) <
           std::make_tuple(b.profile.plan.c, b.profile.cost, b.profile.plan.n_t,
                           b.profile.plan.tau_t);
  });
  for (const auto& r : front_rows) front.push_back(r.profile);

  write_text_file(config.paths.out / "results.csv", write_results_csv(rows));
  write_text_file(config.paths.out / "front.csv", write_results_csv(front_rows));
  if (write_svg) {
    write_text_file(config.paths.out / "front.svg",
                    render_front_svg(front, front_title(config.grid.model,
                                                        config.constraints)));
  }
  fmt::print(log, "{} plans evaluated ({}), {} feasible, {} on the Pareto front\n",
             rows.size(), to_string(config.grid.model), feasible, front.size());
  if (feasible == 0) {
    fmt::print(log,
               "no plan satisfies CR <= alpha_c = {}{}; widen the grid or relax "
               "alpha_c\n",
               config.constraints.alpha_c,
               config.constraints.alpha_p
                   ? fmt::format(" and PR <= alpha_p = {}", *config.constraints.alpha_p)
                   : "");
    return kExitInfeasible;
  }
  print_front(front, log);
  print_selection(config, front, log);
  return kExitOk;
}

int run_report(const RunConfig& config, bool write_svg, std::ostream& log) {
  config.validate();
  const auto rows = read_results_csv(read_text_file(config.paths.out / "results.csv"));
  std::vector<RiskProfile> front;
  std::size_t feasible = 0;
  for (const auto& row : rows) {
    feasible += row.feasible ? 1 : 0;
    if (row.on_front) front.push_back(row.profile);
  }
  std::sort(front.begin(), front.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(a.plan.c, a.cost, a.plan.n_t, a.plan.tau_t) <
           std::make_tuple(b.plan.c, b.cost, b.plan.n_t, b.plan.tau_t);
  });
  fmt::print(log, "{} plans, {} feasible, {} on the Pareto front\n", rows.size(),
             feasible, front.size());
  if (feasible == 0) {
    fmt::print(log, "no feasible plan under alpha_c = {}\n", config.constraints.alpha_c);
    return kExitInfeasible;
  }
  print_front(front, log);
  print_selection(config, front, log);
  if (write_svg) {
    const auto model = front.front().model;
    write_text_file(config.paths.out / "front.svg",
                    render_front_svg(front, front_title(model, config.constraints)));
  }
  return kExitOk;
}

int run_guarded(const std::function<int()>& command, std::ostream& err) {
  try {
    return command();
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const PlanError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    // DataError, DegenerateError, I/O and anything else data-driven.
    fmt::print(err, "error: {}\n", e.what());
    return kExitData;
  }
}

}  // namespace avplan
