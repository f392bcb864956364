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


// Shared fixtures for the unit tests and the acceptance runner.

#ifndef AVPLAN_TESTS_SUPPORT_H_
#define AVPLAN_TESTS_SUPPORT_H_

#include <unistd.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "avplan/bayes.h"
#include "avplan/events.h"
#include "avplan/model.h"
#include "avplan/risk.h"
#include "oracles.h"

namespace testing {

inline oracle::Theta to_oracle(const avplan::WeibullGrowthParams& p) {
  return {p.theta1, p.theta2, p.theta3};
}

inline std::vector<oracle::Unit> to_oracle(const avplan::RecurrentDataset& data) {
  std::vector<oracle::Unit> out;
  for (const auto& u : data.units) out.push_back({u.event_days, u.mileage.daily_miles});
  return out;
}

inline avplan::MileageProfile constant_profile(std::size_t days, double x,
                                               std::string id = "template") {
  return {std::move(id), std::vector<double>(days, x)};
}

inline avplan::UnitHistory make_unit(std::string id, std::vector<double> events,
                                     std::vector<double> daily) {
  avplan::UnitHistory u;
  u.unit_id = id;
  u.event_days = std::move(events);
  u.mileage = {std::move(id), std::move(daily)};
  return u;
}

// Lognormal cloud of draws around centre with log-scale spreads.
inline avplan::PosteriorDraws lognormal_draws(std::mt19937_64& rng, std::size_t m,
                                              const avplan::WeibullGrowthParams& centre,
                                              const std::array<double, 3>& spread) {
  std::normal_distribution<double> z(0.0, 1.0);
  avplan::PosteriorDraws out;
  out.draws.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    out.draws.push_back({centre.theta1 * std::exp(spread[0] * z(rng)),
                         centre.theta2 * std::exp(spread[1] * z(rng)),
                         centre.theta3 * std::exp(spread[2] * z(rng))});
  }
  return out;
}

// Posterior cloud for HPP planning at x = 0.21: the plateau rate
// x bif(730) sits near 0.0145 events/day, between the usual m0 = 0.013 and
// m1 = 0.016.
inline avplan::PosteriorDraws synthetic_hpp_draws(std::uint64_t seed,
                                                  std::size_t m = 1001) {
  std::mt19937_64 rng(seed);
  const double shape = 0.8;
  const double scale = 0.5 / std::pow(730.0, shape);
  const double unit_bif = scale * shape * std::pow(730.0, shape - 1.0) * std::exp(-0.5);
  return lognormal_draws(rng, m, {0.0145 / (0.21 * unit_bif), scale, shape},
                         {0.15, 0.1, 0.02});
}

// A random risk-evaluation problem: a posterior cloud whose metric sits in a
// realistic events/day range, a plan from the usual grid ranges, and a
// requirement straddling the middle of the metric distribution.
struct RiskInstance {
  avplan::PosteriorDraws draws;
  avplan::TestPlan plan;
  avplan::ReliabilityRequirement req;
  avplan::MileageAssumption mileage;
  double tau_h = 730.0;
  double tau_d = 730.0;
};

inline RiskInstance random_risk_instance(std::mt19937_64& rng, std::size_t m,
                                         bool nhpp) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> n_t(1, 10);
  std::uniform_int_distribution<int> tau_t(20, 365);
  std::uniform_int_distribution<int> c(0, 50);
  RiskInstance inst;
  inst.mileage.x_t = 0.1 + 0.2 * unit(rng);
  inst.mileage.x_d = 0.1 + 0.2 * unit(rng);
  // Centre: shape in [0.6, 1.2], growth exponent at tau_h in [0.05, 1.5],
  // then theta1 puts x_d lambda0(tau_h) near a target rate.
  const double shape = 0.6 + 0.6 * unit(rng);
  const double growth = 0.05 + 1.45 * unit(rng);
  const double scale = growth / std::pow(inst.tau_h, shape);
  const double target = 0.005 + 0.025 * unit(rng);
  const double unit_bif = scale * shape * std::pow(inst.tau_h, shape - 1.0) * std::exp(-growth);
  const double theta1 = target / (inst.mileage.x_d * unit_bif);
  inst.draws = lognormal_draws(rng, m, {theta1, scale, shape}, {0.3, 0.3, 0.05});
  // Plans are redrawn until both Monte Carlo denominators, sum_j P_j and
  // sum_j (1 - P_j), are at least 0.05. Below that the explicit 1 - sum(h)
  // is dominated by cancellation error and no longer a usable reference.
  for (int attempt = 0;; ++attempt) {
    inst.plan = {n_t(rng), static_cast<double>(tau_t(rng)), c(rng)};
    if (nhpp) inst.plan.n_t = std::min(inst.plan.n_t, 5);
    double pass = 0.0;
    for (const auto& d : inst.draws.draws) {
      const auto th = to_oracle(d);
      const double mu =
          nhpp ? inst.plan.n_t * inst.mileage.x_t *
                     (oracle::cbif(inst.tau_h + inst.plan.tau_t, th) - oracle::cbif(inst.tau_h, th))
               : inst.mileage.x_t * oracle::bif(inst.tau_h, th) * inst.plan.total_days();
      for (int y = 0; y <= inst.plan.c; ++y) pass += oracle::poisson_pmf(y, mu);
    }
    const double fail = static_cast<double>(m) - pass;
    if ((pass >= 0.05 && fail >= 0.05) || attempt == 1000) break;
  }

  std::vector<double> metric;
  for (const auto& d : inst.draws.draws) {
    const auto th = to_oracle(d);
    metric.push_back(nhpp ? inst.mileage.x_d *
                                (oracle::cbif(inst.tau_h + inst.tau_d, th) -
                                 oracle::cbif(inst.tau_h, th)) / inst.tau_d
                          : inst.mileage.x_d * oracle::bif(inst.tau_h, th));
  }
  std::sort(metric.begin(), metric.end());
  // Thresholds halfway between neighbouring order statistics, so no draw
  // sits on a boundary where rounding could flip its indicator.
  auto between = [&](double q) {
    const auto i = static_cast<std::size_t>(q * static_cast<double>(m - 1));
    return i + 1 < m ? 0.5 * (metric[i] + metric[i + 1]) : metric[i] * (1 + 1e-9);
  };
  inst.req.m0 = between(0.3);
  inst.req.m1 = between(0.7);
  return inst;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("avplan_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing

#endif  // AVPLAN_TESTS_SUPPORT_H_
