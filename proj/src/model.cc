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

#include "avplan/model.h"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace avplan {
namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// theta2 * t^theta3, the exponent of the survival-like term.
double growth_exponent(double t, const WeibullGrowthParams& theta) {
  return t == 0.0 ? 0.0 : theta.theta2 * std::pow(t, theta.theta3);
}

}  // namespace

bool WeibullGrowthParams::valid() const {
  return positive_finite(theta1) && positive_finite(theta2) &&
         positive_finite(theta3);
}

void WeibullGrowthParams::validate() const {
  if (!valid()) {
    throw std::invalid_argument(
        fmt::format("invalid Weibull growth parameters ({}, {}, {}): all "
                    "components must be finite and > 0",
                    theta1, theta2, theta3));
  }
}

void StudyWindows::validate() const {
  if (!(std::isfinite(tau_h) && tau_h >= 0.0)) {
    throw std::invalid_argument(fmt::format("tau_h must be >= 0, got {}", tau_h));
  }
  if (!positive_finite(tau_t)) {
    throw std::invalid_argument(fmt::format("tau_t must be > 0, got {}", tau_t));
  }
  if (!(std::isfinite(tau_d) && tau_d >= tau_t)) {
    throw std::invalid_argument(
        fmt::format("tau_d ({}) must be >= tau_t ({})", tau_d, tau_t));
  }
}

void MileageAssumption::validate() const {
  if (!(std::isfinite(x_t) && x_t >= 0.0 && std::isfinite(x_d) && x_d >= 0.0)) {
    throw std::invalid_argument(fmt::format(
        "daily mileage must be non-negative, got x_t={} x_d={}", x_t, x_d));
  }
}

double MileageProfile::at(double t) const {
  if (!(t > 0.0) || t > horizon()) {
    throw std::out_of_range(fmt::format(
        "time {} outside mileage coverage (0, {}] of unit '{}'", t, horizon(),
        unit_id));
  }
  auto day = static_cast<std::size_t>(std::ceil(t));
  return daily_miles[day - 1];
}

double log_bif(double t, const WeibullGrowthParams& theta) {
  theta.validate();
  if (!(t > 0.0)) {
    throw std::invalid_argument(fmt::format("bif requires t > 0, got {}", t));
  }
  return std::log(theta.theta1) + std::log(theta.theta2) +
         std::log(theta.theta3) + (theta.theta3 - 1.0) * std::log(t) -
         growth_exponent(t, theta);
}

double bif(double t, const WeibullGrowthParams& theta) {
  return std::exp(log_bif(t, theta));
}

double cbif(double t, const WeibullGrowthParams& theta) {
  return cbif_increment(0.0, t, theta);
}

double cbif_increment(double a, double b, const WeibullGrowthParams& theta) {
  theta.validate();
  if (!(a >= 0.0) || !(b >= a)) {
    throw std::invalid_argument(
        fmt::format("cbif increment requires 0 <= a <= b, got a={} b={}", a, b));
  }
  const double ua = growth_exponent(a, theta);
  const double ub = growth_exponent(b, theta);
  // theta1 [exp(-ua) - exp(-ub)] = theta1 exp(-ua) [1 - exp(-(ub - ua))]
  return theta.theta1 * std::exp(-ua) * -std::expm1(-(ub - ua));
}

double cif(double t, const MileageProfile& profile,
           const WeibullGrowthParams& theta) {
  theta.validate();
  if (!(t >= 0.0) || t > profile.horizon()) {
    throw std::out_of_range(fmt::format(
        "cif time {} outside mileage coverage [0, {}] of unit '{}'", t,
        profile.horizon(), profile.unit_id));
  }
  // Consecutive days with equal mileage are integrated as one run.
  double total = 0.0;
  const auto& x = profile.daily_miles;
  std::size_t day = 0;
  while (static_cast<double>(day) < t) {
    std::size_t end = day + 1;
    while (end < x.size() && x[end] == x[day] && static_cast<double>(end) < t) {
      ++end;
    }
    if (x[day] != 0.0) {
      const double upper = std::min(static_cast<double>(end), t);
      total += x[day] * cbif_increment(static_cast<double>(day), upper, theta);
    }
    day = end;
  }
  return total;
}

double avg_intensity(double s, double t, double x,
                     const WeibullGrowthParams& theta) {
  if (!(t > s) || !(s >= 0.0)) {
    throw std::invalid_argument(
        fmt::format("average intensity requires t > s >= 0, got s={} t={}", s, t));
  }
  if (!(std::isfinite(x) && x >= 0.0)) {
    throw std::invalid_argument(fmt::format("mileage must be >= 0, got {}", x));
  }
  return x * cbif_increment(s, t, theta) / (t - s);
}

double hpp_rate(const WeibullGrowthParams& theta, double tau_h, double x) {
  if (!positive_finite(tau_h)) {
    throw std::invalid_argument(fmt::format("tau_h must be > 0, got {}", tau_h));
  }
  if (!(std::isfinite(x) && x >= 0.0)) {
    throw std::invalid_argument(fmt::format("mileage must be >= 0, got {}", x));
  }
  return x * bif(tau_h, theta);
}

}  // namespace avplan
