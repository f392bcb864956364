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

#include "avplan/planner.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

#include "avplan/error.h"
#include "avplan/parallel.h"
#include "csv_util.h"

namespace avplan {
namespace {

std::string describe(const TestPlan& p) {
  return fmt::format("plan (n_t={}, tau_t={}, c={})", p.n_t, p.tau_t, p.c);
}

bool valid_probability_threshold(double v) { return v > 0.0 && v <= 1.0; }

// Plans that share a Poisson test-count mean for every draw.
struct PlanGroup {
  int n_t = 0;
  double tau_t = 0.0;
  int c_max = 0;
  std::vector<std::size_t> members;
};

}  // namespace

PlanError::PlanError(const TestPlan& plan, const std::string& what)
    : std::runtime_error(describe(plan) + ": " + what), plan_(plan) {}

std::vector<double> DayRange::values() const {
  std::vector<double> out;
  for (long k = 0;; ++k) {
    const double v = min + static_cast<double>(k) * step;
    if (v > max + 1e-9 * step) break;
    out.push_back(v);
  }
  return out;
}

void PlanGrid::validate() const {
  if (n_t_values.empty()) throw std::invalid_argument("grid: no n_t values");
  for (int n : n_t_values) {
    if (n < 1) throw std::invalid_argument(fmt::format("grid: n_t {} < 1", n));
  }
  if (!(std::isfinite(tau_t.min) && tau_t.min >= 1.0)) {
    throw std::invalid_argument(
        fmt::format("grid: tau_t min must be >= 1 day, got {}", tau_t.min));
  }
  if (!(std::isfinite(tau_t.max) && tau_t.max >= tau_t.min)) {
    throw std::invalid_argument(fmt::format(
        "grid: tau_t max {} below min {}", tau_t.max, tau_t.min));
  }
  if (!(std::isfinite(tau_t.step) && tau_t.step > 0.0)) {
    throw std::invalid_argument(
        fmt::format("grid: tau_t step must be > 0, got {}", tau_t.step));
  }
  if (c_max < 0) throw std::invalid_argument("grid: c_max must be >= 0");
}

void ConstraintSpec::validate() const {
  if (!valid_probability_threshold(alpha_c)) {
    throw std::invalid_argument(
        fmt::format("alpha_c must be in (0, 1], got {}", alpha_c));
  }
  if (alpha_p && !valid_probability_threshold(*alpha_p)) {
    throw std::invalid_argument(
        fmt::format("alpha_p must be in (0, 1], got {}", *alpha_p));
  }
}

bool ConstraintSpec::admits(const RiskProfile& p) const {
  return p.cr <= alpha_c && (!alpha_p || p.pr <= *alpha_p);
}

std::string_view to_string(PriorityKind kind) {
  switch (kind) {
    case PriorityKind::kMaxPrThreshold:
      return "max_pr_threshold";
    case PriorityKind::kMinApThreshold:
      return "min_ap_threshold";
    case PriorityKind::kMaxCostThreshold:
      return "max_cost_threshold";
  }
  return "";
}

PriorityKind parse_priority_kind(std::string_view text) {
  for (auto kind : {PriorityKind::kMaxPrThreshold, PriorityKind::kMinApThreshold,
                    PriorityKind::kMaxCostThreshold}) {
    if (text == to_string(kind)) return kind;
  }
  throw std::invalid_argument(fmt::format(
      "unknown priority rule '{}': expected max_pr_threshold, min_ap_threshold "
      "or max_cost_threshold",
      text));
}

void PriorityRule::validate() const {
  const bool ok = kind == PriorityKind::kMaxCostThreshold
                      ? std::isfinite(threshold) && threshold > 0.0
                      : threshold >= 0.0 && threshold <= 1.0;
  if (!ok) {
    throw std::invalid_argument(fmt::format(
        "threshold {} out of range for {}", threshold, to_string(kind)));
  }
}

std::vector<TestPlan> enumerate_plans(const PlanGrid& grid) {
  grid.validate();
  const auto taus = grid.tau_t.values();
  std::vector<TestPlan> plans;
  plans.reserve(grid.n_t_values.size() * taus.size() *
                static_cast<std::size_t>(grid.c_max + 1));
  for (int n : grid.n_t_values) {
    for (double tau : taus) {
      for (int c = 0; c <= grid.c_max; ++c) plans.push_back(TestPlan{n, tau, c});
    }
  }
  if (plans.empty()) throw std::invalid_argument("grid enumerates no plans");
  return plans;
}

RiskProfile evaluate_plan(const TestPlan& plan, const PosteriorDraws& draws,
                          const RiskSetting& setting) {
  try {
    if (setting.model == ProcessModel::kHpp) {
      return hpp_risks(plan, draws, setting.requirement, setting.mileage,
                       setting.tau_h);
    }
    const StudyWindows windows{setting.tau_h, plan.tau_t, setting.tau_d};
    return nhpp_risks(plan, draws, windows, setting.requirement, setting.mileage);
  } catch (const PlanError&) {
    throw;
  } catch (const std::exception& e) {
    throw PlanError(plan, e.what());
  }
}

std::vector<RiskProfile> evaluate_grid(std::span<const TestPlan> plans,
                                       const PosteriorDraws& draws,
                                       const RiskSetting& setting) {
  if (plans.empty()) throw std::invalid_argument("no plans to evaluate");
  if (draws.draws.empty()) throw std::invalid_argument("posterior draws are empty");
  setting.requirement.validate();
  setting.mileage.validate();

  const bool hpp = setting.model == ProcessModel::kHpp;
  // HPP plans with equal n_t * tau_t share a mean; NHPP plans need equal
  // (n_t, tau_t).
  std::map<std::pair<double, int>, std::size_t> group_of;
  std::vector<PlanGroup> groups;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto& plan = plans[i];
    try {
      plan.validate();
      if (!hpp) StudyWindows{setting.tau_h, plan.tau_t, setting.tau_d}.validate();
    } catch (const std::exception& e) {
      throw PlanError(plan, e.what());
    }
    const auto key = hpp ? std::make_pair(plan.total_days(), 0)
                         : std::make_pair(plan.tau_t, plan.n_t);
    auto [it, inserted] = group_of.try_emplace(key, groups.size());
    if (inserted) groups.push_back(PlanGroup{plan.n_t, plan.tau_t, 0, {}});
    auto& g = groups[it->second];
    g.c_max = std::max(g.c_max, plan.c);
    g.members.push_back(i);
  }

  // Per-draw quantities shared by every group.
  HppDrawRates rates;
  std::vector<double> metric;
  if (hpp) {
    rates = hpp_draw_rates(draws, setting.tau_h, setting.mileage);
  } else {
    metric = nhpp_demonstration_metric(draws, setting.tau_h, setting.tau_d,
                                       setting.mileage.x_d);
  }
  const std::span<const double> field = hpp ? std::span<const double>(rates.field_rate)
                                            : std::span<const double>(metric);

  std::vector<RiskProfile> out(plans.size());
  parallel_for(groups.size(), [&](std::size_t g) {
    const auto& group = groups[g];
    const TestPlan& lead = plans[group.members.front()];
    std::vector<double> means;
    if (hpp) {
      const double tau = lead.total_days();
      means.resize(draws.size());
      bool any_positive = false;
      for (std::size_t j = 0; j < means.size(); ++j) {
        means[j] = rates.test_rate[j] * tau;
        any_positive = any_positive || means[j] > 0.0;
      }
      if (!any_positive) {
        throw PlanError(lead, fmt::format(
            "HPP test count mean is zero for every draw (x_t={}, tau={}); the "
            "test cannot observe any event",
            setting.mileage.x_t, tau));
      }
    } else {
      means = nhpp_test_mean(draws, setting.tau_h, group.n_t, group.tau_t,
                             setting.mileage.x_t);
    }
    std::vector<std::vector<double>> tables;
    tables.reserve(means.size());
    for (double mean : means) tables.push_back(poisson_cdf_table(group.c_max, mean));

    std::vector<double> pass(means.size());
    for (std::size_t i : group.members) {
      const TestPlan& plan = plans[i];
      for (std::size_t j = 0; j < pass.size(); ++j) pass[j] = tables[j][plan.c];
      auto profile = accumulate_risks(pass, field, setting.requirement);
      profile.model = setting.model;
      profile.plan = plan;
      profile.cost = hpp ? plan.total_days() : plan.tau_t;
      out[i] = profile;
    }
  });
  return out;
}

std::vector<RiskProfile> filter_constraints(std::span<const RiskProfile> profiles,
                                            const ConstraintSpec& spec) {
  spec.validate();
  std::vector<RiskProfile> out;
  for (const auto& p : profiles) {
    if (spec.admits(p)) out.push_back(p);
  }
  return out;
}

bool dominates(const RiskProfile& a, const RiskProfile& b) {
  const bool no_worse = a.pr <= b.pr && a.ap >= b.ap && a.cost <= b.cost;
  const bool better = a.pr < b.pr || a.ap > b.ap || a.cost < b.cost;
  return no_worse && better;
}

std::vector<std::size_t> pareto_front_indices(std::span<const RiskProfile> profiles) {
  // In (cost, pr, -ap) order a dominator always precedes the point it
  // dominates, so each point only needs checking against the front so far.
  std::vector<std::size_t> order(profiles.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = profiles[a];
    const auto& y = profiles[b];
    return std::make_tuple(x.cost, x.pr, -x.ap, a) <
           std::make_tuple(y.cost, y.pr, -y.ap, b);
  });
  std::vector<std::size_t> front;
  for (std::size_t i : order) {
    const bool dominated = std::any_of(front.begin(), front.end(), [&](std::size_t f) {
      return dominates(profiles[f], profiles[i]);
    });
    if (!dominated) front.push_back(i);
  }
  std::sort(front.begin(), front.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = profiles[a];
    const auto& y = profiles[b];
    return std::make_tuple(x.plan.c, x.cost, x.plan.n_t, x.plan.tau_t, a) <
           std::make_tuple(y.plan.c, y.cost, y.plan.n_t, y.plan.tau_t, b);
  });
  return front;
}

std::vector<RiskProfile> pareto_front(std::span<const RiskProfile> profiles) {
  std::vector<RiskProfile> out;
  for (std::size_t i : pareto_front_indices(profiles)) out.push_back(profiles[i]);
  return out;
}

Selection select_plan(std::span<const RiskProfile> front, const PriorityRule& rule) {
  rule.validate();
  if (front.empty()) throw std::invalid_argument("select_plan: empty front");

  std::optional<RiskProfile> best;
  auto better = [&](const RiskProfile& a, const RiskProfile& b) {
    switch (rule.kind) {
      case PriorityKind::kMaxPrThreshold:
        return std::make_tuple(-a.ap, a.cost, a.plan.c) <
               std::make_tuple(-b.ap, b.cost, b.plan.c);
      case PriorityKind::kMinApThreshold:
        return std::make_tuple(a.cost, a.pr, a.plan.c) <
               std::make_tuple(b.cost, b.pr, b.plan.c);
      case PriorityKind::kMaxCostThreshold:
        return std::make_tuple(a.pr, -a.ap, a.plan.c) <
               std::make_tuple(b.pr, -b.ap, b.plan.c);
    }
    return false;
  };
  auto qualifies = [&](const RiskProfile& p) {
    switch (rule.kind) {
      case PriorityKind::kMaxPrThreshold:
        return p.pr <= rule.threshold;
      case PriorityKind::kMinApThreshold:
        return p.ap >= rule.threshold;
      case PriorityKind::kMaxCostThreshold:
        return p.cost <= rule.threshold;
    }
    return false;
  };
  for (const auto& p : front) {
    if (qualifies(p) && (!best || better(p, *best))) best = p;
  }

  Selection s;
  s.choice = best;
  const char* objective = "";
  switch (rule.kind) {
    case PriorityKind::kMaxPrThreshold:
      objective = "PR <= {}: maximize AP, ties by lower cost then smaller c";
      break;
    case PriorityKind::kMinApThreshold:
      objective = "AP >= {}: minimize cost, ties by lower PR then smaller c";
      break;
    case PriorityKind::kMaxCostThreshold:
      objective = "cost <= {}: minimize PR, ties by higher AP then smaller c";
      break;
  }
  s.explanation = fmt::format(fmt::runtime(objective), rule.threshold);
  if (!best) s.explanation = "no feasible plan on the front with " + s.explanation;
  return s;
}

std::vector<PlanRow> classify_plans(std::span<const RiskProfile> profiles,
                                    const ConstraintSpec& spec) {
  spec.validate();
  std::vector<PlanRow> rows;
  rows.reserve(profiles.size());
  std::vector<std::size_t> feasible_index;
  std::vector<RiskProfile> feasible;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    rows.push_back(PlanRow{profiles[i], spec.admits(profiles[i]), false});
    if (rows.back().feasible) {
      feasible_index.push_back(i);
      feasible.push_back(profiles[i]);
    }
  }
  for (std::size_t f : pareto_front_indices(feasible)) {
    rows[feasible_index[f]].on_front = true;
  }
  return rows;
}

std::string write_results_csv(std::span<const PlanRow> rows) {
  std::string out = "model,n_t,tau_t,c,tau_total,cr,pr,ap,feasible,on_front\n";
  for (const auto& row : rows) {
    const auto& p = row.profile;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", to_string(p.model),
                       p.plan.n_t, p.plan.tau_t, p.plan.c, p.plan.total_days(),
                       p.cr, p.pr, p.ap, row.feasible, row.on_front);
  }
  return out;
}

std::vector<PlanRow> read_results_csv(std::string_view text) {
  constexpr std::string_view what = "results CSV";
  auto to_bool = [&](std::string_view s, std::size_t line) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw DataError(fmt::format("{}: line {}: '{}' is not true/false", what, line, s));
  };
  std::vector<PlanRow> rows;
  for (const auto& r : csv::read(text,
                                 {"model", "n_t", "tau_t", "c", "tau_total", "cr",
                                  "pr", "ap", "feasible", "on_front"},
                                 what)) {
    PlanRow row;
    auto& p = row.profile;
    try {
      p.model = parse_process_model(r.fields[0]);
    } catch (const std::invalid_argument& e) {
      throw DataError(fmt::format("{}: line {}: {}", what, r.line, e.what()));
    }
    p.plan.n_t = static_cast<int>(csv::to_long(r.fields[1], r.line, what));
    p.plan.tau_t = csv::to_double(r.fields[2], r.line, what);
    p.plan.c = static_cast<int>(csv::to_long(r.fields[3], r.line, what));
    p.cr = csv::to_double(r.fields[5], r.line, what);
    p.pr = csv::to_double(r.fields[6], r.line, what);
    p.ap = csv::to_double(r.fields[7], r.line, what);
    p.cost = p.model == ProcessModel::kHpp ? p.plan.total_days() : p.plan.tau_t;
    row.feasible = to_bool(r.fields[8], r.line);
    row.on_front = to_bool(r.fields[9], r.line);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace avplan
