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

#include "avplan/bayes.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "avplan/error.h"
#include "avplan/parallel.h"
#include "csv_util.h"

namespace avplan {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRhatTarget = 1.05;
constexpr std::size_t kMaxInitAttempts = 100;
constexpr std::size_t kAdaptBatch = 50;

using LogTheta = std::array<double, 3>;

WeibullGrowthParams from_log(const LogTheta& phi) {
  return {std::exp(phi[0]), std::exp(phi[1]), std::exp(phi[2])};
}

struct ChainOutput {
  std::vector<WeibullGrowthParams> kept;
  std::array<std::vector<double>, 3> trace;  // post-burn-in log theta
  std::size_t accepted = 0;
  std::size_t proposed = 0;
};

double variance(const std::vector<double>& v, std::size_t begin, std::size_t end) {
  const double n = static_cast<double>(end - begin);
  double mean = 0.0;
  for (std::size_t i = begin; i < end; ++i) mean += v[i];
  mean /= n;
  double ss = 0.0;
  for (std::size_t i = begin; i < end; ++i) ss += (v[i] - mean) * (v[i] - mean);
  return ss / (n - 1.0);
}

}  // namespace

void NormalPrior::validate() const {
  for (std::size_t k = 0; k < 3; ++k) {
    if (!std::isfinite(mean[k]) || !(std::isfinite(sd[k]) && sd[k] > 0.0)) {
      throw std::invalid_argument(fmt::format(
          "prior component {}: need finite mean and sd > 0, got ({}, {})",
          k + 1, mean[k], sd[k]));
    }
  }
}

double NormalPrior::log_density(const WeibullGrowthParams& theta) const {
  const std::array<double, 3> v{theta.theta1, theta.theta2, theta.theta3};
  double total = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double z = (v[k] - mean[k]) / sd[k];
    total += -0.5 * z * z - std::log(sd[k]) -
             0.5 * std::log(2.0 * std::numbers::pi);
  }
  return total;
}

void PosteriorDraws::validate() const {
  if (draws.empty()) throw DataError("posterior draws are empty");
  for (std::size_t j = 0; j < draws.size(); ++j) {
    if (!draws[j].valid()) {
      throw DataError(fmt::format("draw {} has a non-positive component", j + 1));
    }
  }
}

LikelihoodEvaluator::LikelihoodEvaluator(const RecurrentDataset& data) {
  data.validate();
  for (const auto& unit : data.units) {
    for (double t : unit.event_days) {
      const double x = unit.mileage.at(t);
      if (x == 0.0) {
        if (!zero_mileage_event_) {
          zero_mileage_event_ = fmt::format(
              "unit '{}' has an event at day {} with zero recorded mileage; "
              "the intensity there is zero",
              unit.unit_id, t);
        }
        continue;
      }
      event_log_miles_ += std::log(x);
      event_times_.push_back(t);
    }
    const auto& daily = unit.mileage.daily_miles;
    std::size_t day = 0;
    while (day < daily.size()) {
      std::size_t end = day + 1;
      while (end < daily.size() && daily[end] == daily[day]) ++end;
      if (daily[day] != 0.0) {
        runs_.push_back(Run{static_cast<double>(day),
                            std::min(static_cast<double>(end), data.horizon_days),
                            daily[day]});
      }
      day = end;
    }
  }
}

LogLikelihood LikelihoodEvaluator::operator()(
    const WeibullGrowthParams& theta) const {
  theta.validate();
  if (zero_mileage_event_) return {kNegInf, zero_mileage_event_};
  double value = event_log_miles_;
  for (double t : event_times_) value += log_bif(t, theta);
  for (const auto& run : runs_) {
    value -= run.miles * cbif_increment(run.start, run.end, theta);
  }
  return {value, std::nullopt};
}

LogLikelihood evaluate_log_likelihood(const WeibullGrowthParams& theta,
                                      const RecurrentDataset& data) {
  return LikelihoodEvaluator(data)(theta);
}

double log_likelihood(const WeibullGrowthParams& theta,
                      const RecurrentDataset& data) {
  return evaluate_log_likelihood(theta, data).value;
}

double log_posterior(const WeibullGrowthParams& theta,
                     const RecurrentDataset& data, const NormalPrior& prior) {
  if (!theta.valid()) return kNegInf;
  return log_likelihood(theta, data) + prior.log_density(theta);
}

void McmcConfig::validate() const {
  if (thin < 1) throw std::invalid_argument("mcmc thin must be >= 1");
  if (chains < 1) throw std::invalid_argument("mcmc chains must be >= 1");
  if (!(target_acceptance > 0.0 && target_acceptance < 1.0)) {
    throw std::invalid_argument(fmt::format(
        "mcmc target_acceptance must be in (0, 1), got {}", target_acceptance));
  }
}

double split_rhat(const std::vector<std::vector<double>>& chains) {
  if (chains.empty()) throw std::invalid_argument("split_rhat: no chains");
  const std::size_t len = chains.front().size();
  if (len < 4) throw std::invalid_argument("split_rhat: chains shorter than 4");
  for (const auto& c : chains) {
    if (c.size() != len) {
      throw std::invalid_argument("split_rhat: chains differ in length");
    }
  }
  const std::size_t half = len / 2;
  std::vector<double> means;
  std::vector<double> vars;
  for (const auto& c : chains) {
    // Halves [0, half) and [len - half, len); the middle draw of an odd
    // chain is dropped.
    for (std::size_t begin : {std::size_t{0}, len - half}) {
      double m = 0.0;
      for (std::size_t i = begin; i < begin + half; ++i) m += c[i];
      means.push_back(m / static_cast<double>(half));
      vars.push_back(variance(c, begin, begin + half));
    }
  }
  const double n = static_cast<double>(half);
  double w = 0.0;
  for (double v : vars) w += v;
  w /= static_cast<double>(vars.size());
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= static_cast<double>(means.size());
  double b = 0.0;
  for (double m : means) b += (m - grand) * (m - grand);
  b *= n / static_cast<double>(means.size() - 1);
  if (w == 0.0) return b == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double var_plus = (n - 1.0) / n * w + b / n;
  return std::sqrt(var_plus / w);
}

FitResult fit_posterior(const RecurrentDataset& data, const NormalPrior& prior,
                        std::size_t n_post, std::uint64_t seed,
                        const McmcConfig& mcmc) {
  if (n_post < 1) throw std::invalid_argument("n_post must be >= 1");
  if (data.units.empty()) throw DataError("dataset has no units");
  prior.validate();
  mcmc.validate();
  const LikelihoodEvaluator likelihood(data);

  auto log_target = [&](const LogTheta& phi) {
    const auto theta = from_log(phi);
    if (!theta.valid()) return kNegInf;
    const double ll = likelihood(theta).value;
    if (!std::isfinite(ll)) return kNegInf;
    // Jacobian of the log transform.
    return ll + prior.log_density(theta) + phi[0] + phi[1] + phi[2];
  };

  // Method-of-moments start: theta3 = 1, theta2 = 1 / tau_h and theta1 from
  // the total event count at that growth curve.
  double mileage_sum = 0.0;
  for (const auto& u : data.units) {
    const auto& d = u.mileage.daily_miles;
    if (!d.empty()) {
      double s = 0.0;
      for (double x : d) s += x;
      mileage_sum += s / static_cast<double>(d.size());
    }
  }
  const double events = std::max(static_cast<double>(data.total_events()), 0.5);
  const double tau_h = data.horizon_days > 0.0 ? data.horizon_days : 1.0;
  const double theta1_start =
      mileage_sum > 0.0 ? events / (mileage_sum * -std::expm1(-1.0)) : 1.0;
  const LogTheta start{std::log(theta1_start), std::log(1.0 / tau_h), 0.0};

  const std::size_t per_chain = (n_post + mcmc.chains - 1) / mcmc.chains;
  const std::size_t sampling_iters = per_chain * mcmc.thin;
  std::vector<ChainOutput> outputs(mcmc.chains);

  parallel_for(mcmc.chains, [&](std::size_t chain) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chain), 0x6d636d63u};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    LogTheta phi = start;
    double current = kNegInf;
    for (std::size_t attempt = 0; attempt <= kMaxInitAttempts; ++attempt) {
      const double jitter = attempt == 0 ? 0.1 : 0.5;
      for (std::size_t k = 0; k < 3; ++k) phi[k] = start[k] + jitter * normal(rng);
      current = log_target(phi);
      if (std::isfinite(current)) break;
    }
    if (!std::isfinite(current)) {
      const auto diag = likelihood(from_log(phi)).diagnostic;
      throw DataError(fmt::format(
          "log-posterior is not finite at the starting point after {} "
          "re-initializations{}{}",
          kMaxInitAttempts, diag ? ": " : "", diag ? *diag : ""));
    }

    // Proposal: phi' = phi + global_scale * scale[k] * N(0, 1).
    std::array<double, 3> scale{1.0, 1.0, 1.0};
    double log_global = std::log(0.1);
    std::array<std::vector<double>, 3> burn_trace;
    std::size_t batch_accepted = 0;
    std::size_t batch_index = 0;

    auto step = [&]() {
      LogTheta proposal = phi;
      const double g = std::exp(log_global);
      for (std::size_t k = 0; k < 3; ++k) proposal[k] += g * scale[k] * normal(rng);
      const double candidate = log_target(proposal);
      if (std::isfinite(candidate) && std::log(unif(rng)) < candidate - current) {
        phi = proposal;
        current = candidate;
        return true;
      }
      return false;
    };

    for (std::size_t it = 1; it <= mcmc.burn_in; ++it) {
      batch_accepted += step() ? 1 : 0;
      for (std::size_t k = 0; k < 3; ++k) burn_trace[k].push_back(phi[k]);
      if (it % kAdaptBatch == 0) {
        ++batch_index;
        const double rate =
            static_cast<double>(batch_accepted) / static_cast<double>(kAdaptBatch);
        const double gain = std::min(1.0, 10.0 / std::sqrt(static_cast<double>(batch_index)));
        log_global += gain * (rate - mcmc.target_acceptance);
        batch_accepted = 0;
        // Periodically rescale the diagonal from the recent half of the
        // burn-in, folding the global factor into the new shape.
        if (it % (20 * kAdaptBatch) == 0 && it >= 1000 &&
            it <= mcmc.burn_in * 4 / 5) {
          const std::size_t from = it / 2;
          std::array<double, 3> sds{};
          bool usable = true;
          for (std::size_t k = 0; k < 3; ++k) {
            sds[k] = std::sqrt(variance(burn_trace[k], from, it));
            usable = usable && std::isfinite(sds[k]) && sds[k] > 0.0;
          }
          if (usable) {
            for (std::size_t k = 0; k < 3; ++k) scale[k] = sds[k];
            log_global = std::log(2.38 / std::sqrt(3.0));
          }
        }
      }
    }

    ChainOutput& out = outputs[chain];
    out.kept.reserve(per_chain);
    for (auto& t : out.trace) t.reserve(sampling_iters);
    for (std::size_t it = 1; it <= sampling_iters; ++it) {
      out.accepted += step() ? 1 : 0;
      ++out.proposed;
      for (std::size_t k = 0; k < 3; ++k) out.trace[k].push_back(phi[k]);
      if (it % mcmc.thin == 0) out.kept.push_back(from_log(phi));
    }
  });

  FitResult result;
  std::size_t accepted = 0;
  std::size_t proposed = 0;
  for (const auto& out : outputs) {
    for (const auto& d : out.kept) {
      if (result.draws.draws.size() < n_post) result.draws.draws.push_back(d);
    }
    accepted += out.accepted;
    proposed += out.proposed;
  }
  result.acceptance_rate =
      proposed > 0 ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;

  if (sampling_iters >= 4) {
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<std::vector<double>> per;
      for (const auto& out : outputs) per.push_back(out.trace[k]);
      result.split_rhat[k] = split_rhat(per);
    }
    result.max_split_rhat =
        *std::max_element(result.split_rhat.begin(), result.split_rhat.end());
    result.converged = result.max_split_rhat < kRhatTarget;
    if (!result.converged) {
      result.warnings.push_back(fmt::format(
          "max split-Rhat {:.4f} exceeds {}; consider a longer burn-in or more "
          "thinning",
          result.max_split_rhat, kRhatTarget));
    }
  } else {
    result.split_rhat.fill(std::numeric_limits<double>::quiet_NaN());
    result.max_split_rhat = std::numeric_limits<double>::quiet_NaN();
    result.warnings.push_back("too few post-burn-in iterations for split-Rhat");
  }
  if (result.acceptance_rate < 0.1 || result.acceptance_rate > 0.6) {
    result.warnings.push_back(fmt::format(
        "acceptance rate {:.3f} is far from the target {}", result.acceptance_rate,
        mcmc.target_acceptance));
  }
  result.draws.provenance = fmt::format(
      "sampler=rwm-log-theta chains={} burn_in={} thin={} seed={} n_post={} "
      "data_fnv1a={:016x}",
      mcmc.chains, mcmc.burn_in, mcmc.thin, seed, n_post, data.fingerprint());
  return result;
}

PosteriorDraws load_draws(std::string_view text) {
  constexpr std::string_view what = "draws CSV";
  PosteriorDraws out;
  for (const auto& row : csv::read(text, {"theta1", "theta2", "theta3"}, what)) {
    WeibullGrowthParams theta{csv::to_double(row.fields[0], row.line, what),
                              csv::to_double(row.fields[1], row.line, what),
                              csv::to_double(row.fields[2], row.line, what)};
    if (!theta.valid()) {
      throw DataError(fmt::format(
          "{}: line {}: parameters must be > 0", what, row.line));
    }
    out.draws.push_back(theta);
  }
  if (out.draws.empty()) throw DataError(fmt::format("{}: no draws", what));
  return out;
}

std::string save_draws(const PosteriorDraws& draws) {
  draws.validate();
  std::string out = "theta1,theta2,theta3\n";
  for (const auto& d : draws.draws) {
    out += fmt::format("{},{},{}\n", d.theta1, d.theta2, d.theta3);
  }
  return out;
}

}  // namespace avplan
