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

// Likelihood, posterior and MCMC sampling for the Weibull growth parameters.

#ifndef AVPLAN_BAYES_H_
#define AVPLAN_BAYES_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avplan/events.h"
#include "avplan/model.h"

namespace avplan {

// Independent normals on (theta1, theta2, theta3), truncated to theta > 0.
struct NormalPrior {
  std::array<double, 3> mean{1.0, 0.01, 1.0};
  std::array<double, 3> sd{100.0, 10.0, 10.0};

  void validate() const;
  // Sum of the three normal log densities. The truncation constant is
  // omitted; it does not depend on theta.
  double log_density(const WeibullGrowthParams& theta) const;
};

struct PosteriorDraws {
  std::vector<WeibullGrowthParams> draws;
  std::string provenance;

  std::size_t size() const { return draws.size(); }
  void validate() const;
};

struct LogLikelihood {
  double value = 0.0;
  // Set when the value is -infinity because an event fell on a zero-mileage
  // day.
  std::optional<std::string> diagnostic;
};

// Log of the recurrent-events likelihood:
//   sum_i { sum_j log[x_i(t_ij) lambda0(t_ij)] - Lambda_i(tau_h) }.
LogLikelihood evaluate_log_likelihood(const WeibullGrowthParams& theta,
                                      const RecurrentDataset& data);
double log_likelihood(const WeibullGrowthParams& theta,
                      const RecurrentDataset& data);

// log_likelihood + prior log density; -infinity outside theta > 0.
double log_posterior(const WeibullGrowthParams& theta,
                     const RecurrentDataset& data, const NormalPrior& prior);

// Precomputed form of a dataset for repeated likelihood evaluation. Mileage
// is compressed into runs of equal daily values, so each evaluation costs
// O(events + runs).
class LikelihoodEvaluator {
 public:
  explicit LikelihoodEvaluator(const RecurrentDataset& data);

  LogLikelihood operator()(const WeibullGrowthParams& theta) const;

 private:
  struct Run {
    double start;
    double end;
    double miles;
  };
  std::vector<double> event_times_;
  double event_log_miles_ = 0.0;
  std::optional<std::string> zero_mileage_event_;
  std::vector<Run> runs_;
};

struct McmcConfig {
  std::size_t burn_in = 10000;
  std::size_t thin = 100;
  std::size_t chains = 4;
  double target_acceptance = 0.3;

  void validate() const;
};

struct FitResult {
  PosteriorDraws draws;
  double acceptance_rate = 0.0;               // post-burn-in, all chains
  std::array<double, 3> split_rhat{};         // per component, on log theta
  double max_split_rhat = 0.0;
  bool converged = false;                     // max_split_rhat < 1.05
  std::vector<std::string> warnings;
};

// Adaptive random-walk Metropolis on log theta with a diagonal proposal.
// Chains start from a method-of-moments point jittered per chain, adapt their
// proposal scales during burn-in, and are thinned and concatenated in chain
// order to n_post draws. Deterministic given seed.
FitResult fit_posterior(const RecurrentDataset& data, const NormalPrior& prior,
                        std::size_t n_post, std::uint64_t seed,
                        const McmcConfig& mcmc = {});

// Potential scale reduction over chains split in half. Each chain must have
// the same length >= 4.
double split_rhat(const std::vector<std::vector<double>>& chains);

PosteriorDraws load_draws(std::string_view csv);
std::string save_draws(const PosteriorDraws& draws);

}  // namespace avplan

#endif  // AVPLAN_BAYES_H_
