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

#include "avplan/risk.h"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "avplan/error.h"

namespace avplan {
namespace {

constexpr long kLogFactorialTableSize = 4096;

double log_factorial(long y) {
  static const std::vector<double> table = [] {
    std::vector<double> t(kLogFactorialTableSize);
    for (long k = 0; k < kLogFactorialTableSize; ++k) {
      t[k] = std::lgamma(static_cast<double>(k) + 1.0);
    }
    return t;
  }();
  return y < kLogFactorialTableSize ? table[y]
                                    : std::lgamma(static_cast<double>(y) + 1.0);
}

double pmf_unchecked(long y, double mean, double log_mean) {
  return std::exp(static_cast<double>(y) * log_mean - mean - log_factorial(y));
}

// Upper summation limit for the right tail; depends on the mean only so that
// scalar and tabulated CDFs sum identical terms.
long tail_limit(double mean) {
  return static_cast<long>(std::ceil(mean + 40.0 * std::sqrt(mean) + 40.0));
}

// Sum of pmf(y) for y = tail_limit down to c + 1.
double upper_tail(long c, double mean, double log_mean) {
  double tail = 0.0;
  for (long y = tail_limit(mean); y > c; --y) {
    tail += pmf_unchecked(y, mean, log_mean);
  }
  return tail;
}

// Lower sum while it is below one half, otherwise one minus the right tail,
// so that values near 1 keep their accuracy.
double cdf_unchecked(long c, double mean) {
  if (mean == 0.0) return 1.0;
  const double log_mean = std::log(mean);
  double lower = 0.0;
  for (long y = 0; y <= c; ++y) lower += pmf_unchecked(y, mean, log_mean);
  if (lower < 0.5) return lower;
  return 1.0 - upper_tail(c, mean, log_mean);
}

void check_mean(double mean) {
  if (!(std::isfinite(mean) && mean > 0.0)) {
    throw std::invalid_argument(
        fmt::format("Poisson mean must be finite and > 0, got {}", mean));
  }
}

void check_draws(const PosteriorDraws& draws) {
  if (draws.draws.empty()) throw std::invalid_argument("posterior draws are empty");
}

}  // namespace

std::string_view to_string(ProcessModel model) {
  return model == ProcessModel::kHpp ? "hpp" : "nhpp";
}

ProcessModel parse_process_model(std::string_view text) {
  if (text == "hpp") return ProcessModel::kHpp;
  if (text == "nhpp") return ProcessModel::kNhpp;
  throw std::invalid_argument(
      fmt::format("unknown model '{}': expected hpp or nhpp", text));
}

void TestPlan::validate() const {
  if (n_t < 1 || !(std::isfinite(tau_t) && tau_t > 0.0) || c < 0) {
    throw std::invalid_argument(fmt::format(
        "invalid test plan (n_t={}, tau_t={}, c={}): need n_t >= 1, tau_t > 0, "
        "c >= 0",
        n_t, tau_t, c));
  }
}

void ReliabilityRequirement::validate() const {
  if (!(std::isfinite(m0) && std::isfinite(m1) && m0 > 0.0 && m1 >= m0)) {
    throw std::invalid_argument(fmt::format(
        "invalid reliability requirement (m0={}, m1={}): need 0 < m0 <= m1", m0,
        m1));
  }
}

double poisson_pmf(long y, double mean) {
  check_mean(mean);
  if (y < 0) return 0.0;
  return pmf_unchecked(y, mean, std::log(mean));
}

double poisson_cdf(long c, double mean) {
  check_mean(mean);
  if (c < 0) return 0.0;
  return cdf_unchecked(c, mean);
}

std::vector<double> poisson_cdf_table(long c_max, double mean) {
  if (!(std::isfinite(mean) && mean >= 0.0)) {
    throw std::invalid_argument(
        fmt::format("Poisson mean must be finite and >= 0, got {}", mean));
  }
  if (c_max < 0) return {};
  std::vector<double> out(static_cast<std::size_t>(c_max) + 1, 1.0);
  if (mean == 0.0) return out;
  const double log_mean = std::log(mean);
  double lower = 0.0;
  long first_tail = c_max + 1;
  for (long c = 0; c <= c_max; ++c) {
    lower += pmf_unchecked(c, mean, log_mean);
    if (lower >= 0.5) {
      first_tail = c;
      break;
    }
    out[c] = lower;
  }
  if (first_tail <= c_max) {
    // Running right-tail sums from the limit downward reproduce
    // upper_tail(c) term by term.
    double tail = 0.0;
    const long limit = tail_limit(mean);
    for (long y = limit; y > c_max; --y) {
      tail += pmf_unchecked(y, mean, log_mean);
    }
    for (long c = c_max; c >= first_tail; --c) {
      out[c] = 1.0 - tail;
      if (c <= limit) tail += pmf_unchecked(c, mean, log_mean);
    }
  }
  return out;
}

HppDrawRates hpp_draw_rates(const PosteriorDraws& draws, double tau_h,
                            const MileageAssumption& mileage) {
  mileage.validate();
  HppDrawRates rates;
  rates.test_rate.reserve(draws.size());
  rates.field_rate.reserve(draws.size());
  for (const auto& theta : draws.draws) {
    const double baseline = bif(tau_h, theta);
    rates.test_rate.push_back(mileage.x_t * baseline);
    rates.field_rate.push_back(mileage.x_d * baseline);
  }
  return rates;
}

std::vector<double> nhpp_demonstration_metric(const PosteriorDraws& draws,
                                              double tau_h, double tau_d,
                                              double x_d) {
  std::vector<double> out;
  out.reserve(draws.size());
  for (const auto& theta : draws.draws) {
    out.push_back(x_d * cbif_increment(tau_h, tau_h + tau_d, theta) / tau_d);
  }
  return out;
}

std::vector<double> nhpp_test_mean(const PosteriorDraws& draws, double tau_h,
                                   int n_t, double tau_t, double x_t) {
  std::vector<double> out;
  out.reserve(draws.size());
  for (const auto& theta : draws.draws) {
    out.push_back(n_t * (x_t * cbif_increment(tau_h, tau_h + tau_t, theta)));
  }
  return out;
}

RiskProfile accumulate_risks(std::span<const double> pass_prob,
                             std::span<const double> metric,
                             const ReliabilityRequirement& req) {
  if (pass_prob.empty() || pass_prob.size() != metric.size()) {
    throw std::invalid_argument("risk accumulation needs matching non-empty inputs");
  }
  const double m = static_cast<double>(pass_prob.size());
  double pass_sum = 0.0;
  double fail_sum = 0.0;
  double cr_num = 0.0;
  double pr_num = 0.0;
  for (std::size_t j = 0; j < pass_prob.size(); ++j) {
    const double p = pass_prob[j];
    const double q = 1.0 - p;
    pass_sum += p;
    fail_sum += q;
    if (metric[j] >= req.m1) cr_num += p;
    if (metric[j] <= req.m0) pr_num += q;
  }

  RiskProfile out;
  out.ap = pass_sum / m;
  out.cr_denominator_zero = pass_sum == 0.0;
  out.pr_denominator_zero = fail_sum == 0.0;
  out.cr = out.cr_denominator_zero ? 0.0 : cr_num / pass_sum;
  out.pr = out.pr_denominator_zero ? 0.0 : pr_num / fail_sum;

  if (pass_prob.size() > 1) {
    double ss_ap = 0.0;
    double ss_cr = 0.0;
    double ss_pr = 0.0;
    for (std::size_t j = 0; j < pass_prob.size(); ++j) {
      const double p = pass_prob[j];
      const double q = 1.0 - p;
      const double a_cr = metric[j] >= req.m1 ? p : 0.0;
      const double a_pr = metric[j] <= req.m0 ? q : 0.0;
      ss_ap += (p - out.ap) * (p - out.ap);
      ss_cr += (a_cr - out.cr * p) * (a_cr - out.cr * p);
      ss_pr += (a_pr - out.pr * q) * (a_pr - out.pr * q);
    }
    const double dof = m - 1.0;
    out.ap_se = std::sqrt(ss_ap / dof / m);
    if (!out.cr_denominator_zero) out.cr_se = std::sqrt(ss_cr / dof * m) / pass_sum;
    if (!out.pr_denominator_zero) out.pr_se = std::sqrt(ss_pr / dof * m) / fail_sum;
  }
  return out;
}

RiskProfile hpp_risks(const TestPlan& plan, const PosteriorDraws& draws,
                      const ReliabilityRequirement& req,
                      const MileageAssumption& mileage, double tau_h) {
  plan.validate();
  req.validate();
  check_draws(draws);
  const auto rates = hpp_draw_rates(draws, tau_h, mileage);
  const double tau = plan.total_days();
  std::vector<double> pass(draws.size());
  bool any_positive = false;
  for (std::size_t j = 0; j < pass.size(); ++j) {
    const double mean = rates.test_rate[j] * tau;
    any_positive = any_positive || mean > 0.0;
    pass[j] = cdf_unchecked(plan.c, mean);
  }
  if (!any_positive) {
    throw DegenerateError(fmt::format(
        "HPP test count mean is zero for every draw (x_t={}, tau={}); the test "
        "cannot observe any event",
        mileage.x_t, tau));
  }
  auto out = accumulate_risks(pass, rates.field_rate, req);
  out.model = ProcessModel::kHpp;
  out.plan = plan;
  out.cost = tau;
  return out;
}

RiskProfile nhpp_risks(const TestPlan& plan, const PosteriorDraws& draws,
                       const StudyWindows& windows,
                       const ReliabilityRequirement& req,
                       const MileageAssumption& mileage) {
  plan.validate();
  req.validate();
  mileage.validate();
  windows.validate();
  check_draws(draws);
  if (windows.tau_t != plan.tau_t) {
    throw std::invalid_argument(fmt::format(
        "window tau_t {} does not match plan tau_t {}", windows.tau_t, plan.tau_t));
  }
  const auto means =
      nhpp_test_mean(draws, windows.tau_h, plan.n_t, plan.tau_t, mileage.x_t);
  const auto metric = nhpp_demonstration_metric(draws, windows.tau_h,
                                                windows.tau_d, mileage.x_d);
  std::vector<double> pass(draws.size());
  for (std::size_t j = 0; j < pass.size(); ++j) {
    pass[j] = cdf_unchecked(plan.c, means[j]);
  }
  auto out = accumulate_risks(pass, metric, req);
  out.model = ProcessModel::kNhpp;
  out.plan = plan;
  out.cost = plan.tau_t;
  return out;
}

}  // namespace avplan
