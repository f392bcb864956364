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

// Posterior consumer's risk (CR), producer's risk (PR) and acceptance
// probability (AP) of a Poisson assurance test, estimated by Monte Carlo over
// posterior draws of the Weibull growth parameters.
//
// For draw j let P_j = Pr(y <= c | theta_j) and let r_j be the reliability
// metric the requirement is judged on. Then
//
//   AP = mean_j P_j
//   CR = sum_j P_j 1{r_j >= m1} / sum_j P_j
//   PR = sum_j (1 - P_j) 1{r_j <= m0} / sum_j (1 - P_j)
//
// and a risk whose denominator is exactly zero is reported as 0 with the
// matching flag set on the profile.
//
// HPP:  r_j = x_d lambda0(tau_h),  test count mean = x_t lambda0(tau_h) n_t tau_t.
// NHPP: r_j = x_d [Lambda0(tau_h + tau_d) - Lambda0(tau_h)] / tau_d,
//       test count mean = n_t x_t [Lambda0(tau_h + tau_t) - Lambda0(tau_h)].

#ifndef AVPLAN_RISK_H_
#define AVPLAN_RISK_H_

#include <span>
#include <string_view>
#include <vector>

#include "avplan/bayes.h"
#include "avplan/model.h"

namespace avplan {

enum class ProcessModel { kHpp, kNhpp };

std::string_view to_string(ProcessModel model);
// Accepts "hpp" / "nhpp". Throws std::invalid_argument otherwise.
ProcessModel parse_process_model(std::string_view text);

struct TestPlan {
  int n_t = 1;         // vehicles on test
  double tau_t = 1.0;  // test days per vehicle
  int c = 0;           // maximum allowable failures

  double total_days() const { return n_t * tau_t; }
  void validate() const;

  friend bool operator==(const TestPlan&, const TestPlan&) = default;
};

struct ReliabilityRequirement {
  double m0 = 0.0;  // producer's bound, events/day
  double m1 = 0.0;  // consumer's bound, events/day

  void validate() const;
};

struct RiskProfile {
  ProcessModel model = ProcessModel::kHpp;
  TestPlan plan;
  double cr = 0.0;
  double pr = 0.0;
  double ap = 0.0;
  double cost = 0.0;  // tau = n_t tau_t for HPP, tau_t for NHPP
  bool cr_denominator_zero = false;
  bool pr_denominator_zero = false;
  // Monte Carlo standard errors (delta method for the ratio estimators).
  // Diagnostic only.
  double ap_se = 0.0;
  double cr_se = 0.0;
  double pr_se = 0.0;
};

// Poisson pmf, evaluated in log space. Requires mean > 0.
double poisson_pmf(long y, double mean);
// Pr(Y <= c) for Y ~ Poisson(mean). Requires mean > 0.
double poisson_cdf(long c, double mean);
// poisson_cdf(c, mean) for c = 0..c_max, bit-identical to the scalar calls.
// A mean of exactly 0 yields all ones.
std::vector<double> poisson_cdf_table(long c_max, double mean);

// Per-draw quantities that do not depend on the plan.
struct HppDrawRates {
  std::vector<double> test_rate;    // x_t lambda0(tau_h), events/day
  std::vector<double> field_rate;   // x_d lambda0(tau_h), events/day
};
HppDrawRates hpp_draw_rates(const PosteriorDraws& draws, double tau_h,
                            const MileageAssumption& mileage);

RiskProfile hpp_risks(const TestPlan& plan, const PosteriorDraws& draws,
                      const ReliabilityRequirement& req,
                      const MileageAssumption& mileage, double tau_h);

// windows.tau_t must equal plan.tau_t.
RiskProfile nhpp_risks(const TestPlan& plan, const PosteriorDraws& draws,
                       const StudyWindows& windows,
                       const ReliabilityRequirement& req,
                       const MileageAssumption& mileage);

// Demonstration-period metric x_d [Lambda0(tau_h + tau_d) - Lambda0(tau_h)] / tau_d
// for each draw.
std::vector<double> nhpp_demonstration_metric(const PosteriorDraws& draws,
                                              double tau_h, double tau_d,
                                              double x_d);
// Expected test-period event count n_t x_t [Lambda0(tau_h + tau_t) - Lambda0(tau_h)]
// for each draw.
std::vector<double> nhpp_test_mean(const PosteriorDraws& draws, double tau_h,
                                   int n_t, double tau_t, double x_t);

// Risk estimators from per-draw pass probabilities and metrics. Shared by
// the scalar entry points above and the grid evaluator.
RiskProfile accumulate_risks(std::span<const double> pass_prob,
                             std::span<const double> metric,
                             const ReliabilityRequirement& req);

}  // namespace avplan

#endif  // AVPLAN_RISK_H_
