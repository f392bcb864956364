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

// Test-plan search: grid enumeration, risk evaluation, the CR constraint,
// the (PR down, AP up, cost down) Pareto front and priority-driven selection.

#ifndef AVPLAN_PLANNER_H_
#define AVPLAN_PLANNER_H_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "avplan/bayes.h"
#include "avplan/risk.h"

namespace avplan {

struct DayRange {
  double min = 1.0;
  double max = 1.0;
  double step = 1.0;

  // min, min + step, ... up to max (inclusive, with a 1e-9 step slack).
  std::vector<double> values() const;
};

struct PlanGrid {
  ProcessModel model = ProcessModel::kHpp;
  std::vector<int> n_t_values{1};
  DayRange tau_t;
  int c_max = 0;

  void validate() const;
};

struct ConstraintSpec {
  double alpha_c = 1.0;
  std::optional<double> alpha_p;

  void validate() const;
  bool admits(const RiskProfile& p) const;
};

enum class PriorityKind { kMaxPrThreshold, kMinApThreshold, kMaxCostThreshold };

std::string_view to_string(PriorityKind kind);
PriorityKind parse_priority_kind(std::string_view text);

struct PriorityRule {
  PriorityKind kind = PriorityKind::kMaxPrThreshold;
  double threshold = 0.0;

  void validate() const;
};

// Everything besides the plan and the draws that a risk evaluation needs.
struct RiskSetting {
  ProcessModel model = ProcessModel::kHpp;
  double tau_h = 730.0;
  double tau_d = 730.0;  // NHPP only
  ReliabilityRequirement requirement;
  MileageAssumption mileage;
};

// A risk-module failure for one plan of a grid.
class PlanError : public std::runtime_error {
 public:
  PlanError(const TestPlan& plan, const std::string& what);
  const TestPlan& plan() const { return plan_; }

 private:
  TestPlan plan_;
};

// Cartesian product ordered by n_t, then tau_t, then c.
std::vector<TestPlan> enumerate_plans(const PlanGrid& grid);

// Single-plan dispatch to hpp_risks / nhpp_risks.
RiskProfile evaluate_plan(const TestPlan& plan, const PosteriorDraws& draws,
                          const RiskSetting& setting);

// One profile per plan, in input order. Plans sharing a Poisson mean are
// evaluated together; results are bit-identical to evaluate_plan and do not
// depend on the worker count.
std::vector<RiskProfile> evaluate_grid(std::span<const TestPlan> plans,
                                       const PosteriorDraws& draws,
                                       const RiskSetting& setting);

// Keeps profiles with cr <= alpha_c (and pr <= alpha_p when set), in order.
std::vector<RiskProfile> filter_constraints(std::span<const RiskProfile> profiles,
                                            const ConstraintSpec& spec);

// a dominates b: no worse on PR, AP and cost, strictly better on one.
bool dominates(const RiskProfile& a, const RiskProfile& b);

// Indices of non-dominated profiles, sorted by (c, cost, n_t, tau_t, index).
// Profiles tied on all three criteria are all kept.
std::vector<std::size_t> pareto_front_indices(std::span<const RiskProfile> profiles);
std::vector<RiskProfile> pareto_front(std::span<const RiskProfile> profiles);

struct Selection {
  std::optional<RiskProfile> choice;  // empty: no front member qualifies
  std::string explanation;
};

// max_pr_threshold:   pr <= t, maximize ap, then min cost, then min c.
// min_ap_threshold:   ap >= t, minimize cost, then min pr, then min c.
// max_cost_threshold: cost <= t, minimize pr, then max ap, then min c.
Selection select_plan(std::span<const RiskProfile> front, const PriorityRule& rule);

struct PlanRow {
  RiskProfile profile;
  bool feasible = false;
  bool on_front = false;
};

// Flags every profile against the constraints and the front of the feasible
// subset.
std::vector<PlanRow> classify_plans(std::span<const RiskProfile> profiles,
                                    const ConstraintSpec& spec);

// Header: model,n_t,tau_t,c,tau_total,cr,pr,ap,feasible,on_front
std::string write_results_csv(std::span<const PlanRow> rows);
std::vector<PlanRow> read_results_csv(std::string_view text);

}  // namespace avplan

#endif  // AVPLAN_PLANNER_H_
