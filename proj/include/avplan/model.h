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

// Weibull reliability-growth intensity model.
//
// Units are fixed throughout the library: time in days, mileage in
// k-miles/day, intensities in events/day. The mileage effect is
// multiplicative, g[x] = x.

#ifndef AVPLAN_MODEL_H_
#define AVPLAN_MODEL_H_

#include <string>
#include <vector>

namespace avplan {

// theta1: asymptotic expected baseline event count.
// theta2: scale-like growth parameter.
// theta3: shape-like growth parameter.
struct WeibullGrowthParams {
  double theta1 = 1.0;
  double theta2 = 1.0;
  double theta3 = 1.0;

  bool valid() const;
  // Throws std::invalid_argument unless all components are finite and > 0.
  void validate() const;

  friend bool operator==(const WeibullGrowthParams&,
                         const WeibullGrowthParams&) = default;
};

struct StudyWindows {
  double tau_h = 0.0;  // historical period length
  double tau_t = 1.0;  // test days per vehicle
  double tau_d = 1.0;  // demonstration period length

  void validate() const;
};

struct MileageAssumption {
  double x_t = 0.0;  // daily mileage during testing
  double x_d = 0.0;  // daily mileage during field use

  void validate() const;
};

// Daily mileage of one unit. Day k (1-based) covers the interval (k-1, k]
// and daily_miles[k-1] is the mileage driven on it.
struct MileageProfile {
  std::string unit_id;
  std::vector<double> daily_miles;

  double horizon() const { return static_cast<double>(daily_miles.size()); }
  // Mileage on the day containing t, for 0 < t <= horizon().
  double at(double t) const;

  friend bool operator==(const MileageProfile&,
                         const MileageProfile&) = default;
};

// Baseline intensity function lambda0(t). Requires t > 0.
double bif(double t, const WeibullGrowthParams& theta);

// log lambda0(t), computed without forming the intensity itself.
double log_bif(double t, const WeibullGrowthParams& theta);

// Cumulative baseline intensity Lambda0(t) = theta1 [1 - exp(-theta2 t^theta3)].
double cbif(double t, const WeibullGrowthParams& theta);

// Lambda0(b) - Lambda0(a) for 0 <= a <= b, without cancellation when both
// values are close to theta1.
double cbif_increment(double a, double b, const WeibullGrowthParams& theta);

// Mileage-adjusted cumulative intensity Lambda_i(t), integrated exactly
// under piecewise-constant daily mileage.
double cif(double t, const MileageProfile& profile,
           const WeibullGrowthParams& theta);

// Average intensity over (s, t] at constant daily mileage x.
double avg_intensity(double s, double t, double x,
                     const WeibullGrowthParams& theta);

// Constant post-growth intensity x * lambda0(tau_h): the growth curve frozen
// at the end of the historical period.
double hpp_rate(const WeibullGrowthParams& theta, double tau_h, double x);

}  // namespace avplan

#endif  // AVPLAN_MODEL_H_
