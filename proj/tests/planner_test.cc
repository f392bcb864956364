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


#include <algorithm>
#include <cstdlib>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "avplan/error.h"
#include "avplan/planner.h"
#include "doctest.h"
#include "oracles.h"
#include "support.h"

using avplan::PlanGrid;
using avplan::PriorityKind;
using avplan::PriorityRule;
using avplan::RiskProfile;
using avplan::TestPlan;

namespace {

RiskProfile profile(double pr, double ap, double cost, int c = 0, int n_t = 1) {
  RiskProfile p;
  p.pr = pr;
  p.ap = ap;
  p.cost = cost;
  p.plan = {n_t, cost / n_t, c};
  return p;
}

// Values on a coarse lattice so that ties and exact duplicates occur.
std::vector<RiskProfile> random_profiles(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> level(0, 30);
  std::uniform_int_distribution<int> c(0, 50);
  std::uniform_int_distribution<int> days(1, 40);
  std::vector<RiskProfile> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = profile(level(rng) / 30.0, level(rng) / 30.0, 10.0 * days(rng), c(rng));
    p.plan.tau_t = p.cost;
    out.push_back(p);
  }
  return out;
}

std::vector<oracle::Point> points(const std::vector<RiskProfile>& v) {
  std::vector<oracle::Point> out;
  for (const auto& p : v) out.push_back({p.pr, p.ap, p.cost});
  return out;
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

avplan::RiskSetting hpp_setting() {
  avplan::RiskSetting s;
  s.model = avplan::ProcessModel::kHpp;
  s.requirement = {0.013, 0.016};
  s.mileage = {0.21, 0.21};
  return s;
}

// Synthetic posterior with x lambda0(730) near 0.0145 events/day.
avplan::PosteriorDraws synthetic_draws(std::uint64_t seed, std::size_t m = 1001) {
  return testing::synthetic_hpp_draws(seed, m);
}

bool same_profile(const RiskProfile& a, const RiskProfile& b) {
  return a.model == b.model && a.plan == b.plan && a.cr == b.cr && a.pr == b.pr &&
         a.ap == b.ap && a.cost == b.cost && a.cr_denominator_zero == b.cr_denominator_zero &&
         a.pr_denominator_zero == b.pr_denominator_zero && a.ap_se == b.ap_se &&
         a.cr_se == b.cr_se && a.pr_se == b.pr_se;
}

}  // namespace

TEST_SUITE("planner") {

TEST_CASE("day ranges are inclusive") {
  CHECK(avplan::DayRange{20, 23, 1}.values() == std::vector<double>{20, 21, 22, 23});
  CHECK(avplan::DayRange{5, 5, 1}.values() == std::vector<double>{5});
  CHECK(avplan::DayRange{1, 2, 0.1}.values().size() == 11);
}

TEST_CASE("HPP default grid spans 200 to 3650 vehicle-days") {
  const PlanGrid grid{avplan::ProcessModel::kHpp, {10}, {20, 365, 1}, 50};
  const auto plans = avplan::enumerate_plans(grid);
  CHECK(plans.size() == 346u * 51u);
  double lo = 1e9;
  double hi = 0;
  for (const auto& p : plans) {
    lo = std::min(lo, p.total_days());
    hi = std::max(hi, p.total_days());
  }
  CHECK(lo == 200);
  CHECK(hi == 3650);
  CHECK(plans[0] == TestPlan{10, 20, 0});
  CHECK(plans[1] == TestPlan{10, 20, 1});
  CHECK(plans[51] == TestPlan{10, 21, 0});
}

TEST_CASE("enumeration order is n_t, then tau_t, then c") {
  const PlanGrid grid{avplan::ProcessModel::kNhpp, {1, 5}, {100, 300, 100}, 2};
  const auto plans = avplan::enumerate_plans(grid);
  REQUIRE(plans.size() == 18);
  auto key = [](const TestPlan& p) { return std::make_tuple(p.n_t, p.tau_t, p.c); };
  for (std::size_t i = 1; i < plans.size(); ++i) CHECK(key(plans[i - 1]) < key(plans[i]));
}

TEST_CASE("NHPP single-vehicle grid and one-point grid") {
  const auto single =
      avplan::enumerate_plans({avplan::ProcessModel::kNhpp, {1}, {365, 365, 1}, 5});
  CHECK(single.size() == 6);
  CHECK(single.back() == TestPlan{1, 365, 5});
  CHECK(avplan::enumerate_plans({avplan::ProcessModel::kHpp, {3}, {7, 7, 1}, 0}).size() == 1);
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(avplan::enumerate_plans({avplan::ProcessModel::kHpp, {}, {1, 2, 1}, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(avplan::enumerate_plans({avplan::ProcessModel::kHpp, {0}, {1, 2, 1}, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(avplan::enumerate_plans({avplan::ProcessModel::kHpp, {1}, {5, 2, 1}, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(avplan::enumerate_plans({avplan::ProcessModel::kHpp, {1}, {1, 2, 0}, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(avplan::enumerate_plans({avplan::ProcessModel::kHpp, {1}, {1, 2, 1}, -1}),
                  std::invalid_argument);
}

TEST_CASE("evaluate_grid on one plan") {
  const auto draws = synthetic_draws(1, 200);
  const std::vector<TestPlan> plans{{10, 130, 21}};
  const auto out = avplan::evaluate_grid(plans, draws, hpp_setting());
  REQUIRE(out.size() == 1);
  CHECK(same_profile(out[0], avplan::evaluate_plan(plans[0], draws, hpp_setting())));
}

TEST_CASE("evaluate_grid matches sequential evaluation exactly") {
  const auto draws = synthetic_draws(2, 501);
  for (auto model : {avplan::ProcessModel::kHpp, avplan::ProcessModel::kNhpp}) {
    auto setting = hpp_setting();
    setting.model = model;
    // 1000 plans with repeated n_t * tau_t products and repeated (n_t, tau_t).
    const auto plans = avplan::enumerate_plans({model, {1, 2, 4, 5}, {20, 260, 10}, 9});
    REQUIRE(plans.size() == 1000);
    const auto grid = avplan::evaluate_grid(plans, draws, setting);
    REQUIRE(grid.size() == plans.size());
    for (std::size_t i = 0; i < plans.size(); ++i) {
      CHECK(same_profile(grid[i], avplan::evaluate_plan(plans[i], draws, setting)));
    }
  }
}

TEST_CASE("evaluate_grid is permutation-equivariant and schedule-independent") {
  const auto draws = synthetic_draws(3, 301);
  auto plans = avplan::enumerate_plans({avplan::ProcessModel::kHpp, {2, 10}, {20, 120, 5}, 12});
  const auto base = avplan::evaluate_grid(plans, draws, hpp_setting());
  std::vector<std::size_t> perm(plans.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::mt19937_64 rng(4);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<TestPlan> shuffled;
  for (std::size_t i : perm) shuffled.push_back(plans[i]);
  const auto out = avplan::evaluate_grid(shuffled, draws, hpp_setting());
  for (std::size_t k = 0; k < perm.size(); ++k) CHECK(same_profile(out[k], base[perm[k]]));

  ::setenv("AVPLAN_THREADS", "1", 1);
  const auto serial = avplan::evaluate_grid(plans, draws, hpp_setting());
  ::setenv("AVPLAN_THREADS", "3", 1);
  const auto three = avplan::evaluate_grid(plans, draws, hpp_setting());
  ::unsetenv("AVPLAN_THREADS");
  for (std::size_t i = 0; i < plans.size(); ++i) {
    CHECK(same_profile(serial[i], base[i]));
    CHECK(same_profile(three[i], base[i]));
  }
}

TEST_CASE("evaluate_grid names the offending plan") {
  const auto draws = synthetic_draws(5, 50);
  auto setting = hpp_setting();
  setting.model = avplan::ProcessModel::kNhpp;
  setting.tau_d = 100;
  const std::vector<TestPlan> plans{{1, 50, 1}, {1, 150, 2}};
  try {
    avplan::evaluate_grid(plans, draws, setting);
    FAIL("expected a PlanError");
  } catch (const avplan::PlanError& e) {
    CHECK(e.plan() == plans[1]);
    CHECK(std::string(e.what()).find("tau_t=150") != std::string::npos);
  }
  auto zero = hpp_setting();
  zero.mileage.x_t = 0;
  CHECK_THROWS_AS(avplan::evaluate_grid(plans, draws, zero), avplan::PlanError);
  CHECK_THROWS_AS(avplan::evaluate_plan(plans[0], draws, zero), avplan::PlanError);
  CHECK_THROWS_AS(avplan::evaluate_grid(std::vector<TestPlan>{}, draws, hpp_setting()),
                  std::invalid_argument);
}

TEST_CASE("constraint filter") {
  std::vector<RiskProfile> v{profile(0.1, 0.5, 100), profile(0.2, 0.6, 200),
                             profile(0.3, 0.7, 300)};
  v[0].cr = 0.05;
  v[1].cr = 0.086;
  v[2].cr = 0.0861;
  const auto kept = avplan::filter_constraints(v, {0.086, std::nullopt});
  REQUIRE(kept.size() == 2);
  CHECK(kept[1].cost == 200);
  CHECK(avplan::filter_constraints(v, {1.0, std::nullopt}).size() == 3);
  CHECK(avplan::filter_constraints(v, {1.0, 0.2}).size() == 2);
  CHECK(avplan::filter_constraints(v, {0.01, std::nullopt}).empty());
  CHECK_THROWS_AS(avplan::filter_constraints(v, {0.0, std::nullopt}), std::invalid_argument);
  CHECK_THROWS_AS(avplan::filter_constraints(v, {1.5, std::nullopt}), std::invalid_argument);
}

TEST_CASE("hand-checked dominance") {
  const std::vector<RiskProfile> v{profile(0.1, 0.8, 100, 0), profile(0.2, 0.7, 200, 1),
                                   profile(0.05, 0.9, 300, 2)};
  CHECK(avplan::dominates(v[0], v[1]));
  CHECK_FALSE(avplan::dominates(v[1], v[0]));
  CHECK_FALSE(avplan::dominates(v[0], v[2]));
  CHECK_FALSE(avplan::dominates(v[0], v[0]));
  CHECK(avplan::pareto_front_indices(v) == std::vector<std::size_t>{0, 2});
  CHECK(avplan::pareto_front_indices(std::vector<RiskProfile>{v[1]}) ==
        std::vector<std::size_t>{0});
}

TEST_CASE("exact duplicates are all kept") {
  const std::vector<RiskProfile> v{profile(0.1, 0.8, 100, 3), profile(0.1, 0.8, 100, 3),
                                   profile(0.2, 0.8, 100, 4)};
  CHECK(avplan::pareto_front_indices(v) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("front equals the brute-force non-dominated set") {
  std::mt19937_64 rng(6);
  for (int batch = 0; batch < 5; ++batch) {
    const auto v = random_profiles(rng, 1000);
    CHECK(sorted(avplan::pareto_front_indices(v)) == oracle::brute_force_front(points(v)));
  }
}

TEST_CASE("front output order is c, then cost") {
  std::mt19937_64 rng(7);
  const auto v = random_profiles(rng, 500);
  const auto idx = avplan::pareto_front_indices(v);
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const auto& a = v[idx[k - 1]];
    const auto& b = v[idx[k]];
    CHECK(std::make_tuple(a.plan.c, a.cost, a.plan.n_t, a.plan.tau_t, idx[k - 1]) <
          std::make_tuple(b.plan.c, b.cost, b.plan.n_t, b.plan.tau_t, idx[k]));
  }
}

TEST_CASE("property: front is idempotent and certifies every excluded point") {
  std::mt19937_64 rng(8);
  for (int batch = 0; batch < 10; ++batch) {
    const auto v = random_profiles(rng, 300);
    const auto front = avplan::pareto_front(v);
    CHECK(avplan::pareto_front(front).size() == front.size());
    CHECK(avplan::pareto_front_indices(front).size() == front.size());
    const auto idx = avplan::pareto_front_indices(v);
    const std::set<std::size_t> on(idx.begin(), idx.end());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (on.count(i)) continue;
      bool covered = false;
      for (std::size_t f : idx) covered = covered || avplan::dominates(v[f], v[i]);
      CHECK(covered);
    }
  }
}

TEST_CASE("property: adding a point never promotes a dominated one") {
  std::mt19937_64 rng(9);
  for (int batch = 0; batch < 20; ++batch) {
    auto v = random_profiles(rng, 200);
    const auto before = avplan::pareto_front_indices(v);
    const std::set<std::size_t> old(before.begin(), before.end());
    v.push_back(random_profiles(rng, 1)[0]);
    for (std::size_t i : avplan::pareto_front_indices(v)) {
      CHECK((old.count(i) == 1 || i == v.size() - 1));
    }
  }
}

TEST_CASE("property: filtering then taking the front matches the feasible brute force") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> cr(0.0, 0.2);
  for (int batch = 0; batch < 10; ++batch) {
    auto v = random_profiles(rng, 400);
    for (auto& p : v) p.cr = cr(rng);
    const avplan::ConstraintSpec spec{0.086, std::nullopt};
    const auto feasible = avplan::filter_constraints(v, spec);
    std::vector<RiskProfile> expected;
    for (std::size_t i : oracle::brute_force_front(points(feasible))) expected.push_back(feasible[i]);
    const auto front = avplan::pareto_front(feasible);
    REQUIRE(front.size() == expected.size());
    for (const auto& p : front) {
      CHECK(p.cr <= 0.086);
      CHECK(std::any_of(expected.begin(), expected.end(),
                        [&](const RiskProfile& q) { return same_profile(p, q); }));
    }
    // classify_plans flags the same members.
    const auto rows = avplan::classify_plans(v, spec);
    std::size_t flagged = 0;
    for (const auto& r : rows) {
      CHECK(r.feasible == (r.profile.cr <= 0.086));
      if (r.on_front) {
        CHECK(r.feasible);
        ++flagged;
      }
    }
    CHECK(flagged == front.size());
  }
}

TEST_CASE("selection on a single-plan front") {
  const std::vector<RiskProfile> front{profile(0.05, 0.7, 1000, 12)};
  const auto s = avplan::select_plan(front, {PriorityKind::kMaxPrThreshold, 0.1});
  REQUIRE(s.choice.has_value());
  CHECK(s.choice->plan.c == 12);
  const auto none = avplan::select_plan(front, {PriorityKind::kMaxCostThreshold, 500});
  CHECK_FALSE(none.choice.has_value());
  CHECK(none.explanation.find("no feasible plan") != std::string::npos);
  CHECK_THROWS_AS(avplan::select_plan(std::vector<RiskProfile>{}, {PriorityKind::kMaxPrThreshold, 0.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(avplan::select_plan(front, {PriorityKind::kMaxPrThreshold, 1.5}),
                  std::invalid_argument);
}

TEST_CASE("selection matches an exhaustive scan") {
  const auto draws = synthetic_draws(11, 501);
  const auto plans = avplan::enumerate_plans({avplan::ProcessModel::kHpp, {10}, {20, 365, 1}, 50});
  const auto profiles = avplan::evaluate_grid(plans, draws, hpp_setting());
  const auto front = avplan::pareto_front(avplan::filter_constraints(profiles, {0.086, std::nullopt}));
  REQUIRE(front.size() > 3);
  const std::vector<PriorityRule> rules{
      {PriorityKind::kMaxPrThreshold, 0.1}, {PriorityKind::kMaxPrThreshold, 0.2},
      {PriorityKind::kMinApThreshold, 0.5}, {PriorityKind::kMinApThreshold, 0.8},
      {PriorityKind::kMaxCostThreshold, 1000}, {PriorityKind::kMaxCostThreshold, 2500}};
  for (const auto& rule : rules) {
    // Exhaustive: collect every qualifying member, sort by the rule's key.
    std::vector<RiskProfile> ok;
    for (const auto& p : front) {
      const bool q = rule.kind == PriorityKind::kMaxPrThreshold ? p.pr <= rule.threshold
                     : rule.kind == PriorityKind::kMinApThreshold ? p.ap >= rule.threshold
                                                                 : p.cost <= rule.threshold;
      if (q) ok.push_back(p);
    }
    auto key = [&](const RiskProfile& p) {
      switch (rule.kind) {
        case PriorityKind::kMaxPrThreshold: return std::make_tuple(-p.ap, p.cost, double(p.plan.c));
        case PriorityKind::kMinApThreshold: return std::make_tuple(p.cost, p.pr, double(p.plan.c));
        default: return std::make_tuple(p.pr, -p.ap, double(p.plan.c));
      }
    };
    std::stable_sort(ok.begin(), ok.end(),
                     [&](const RiskProfile& a, const RiskProfile& b) { return key(a) < key(b); });
    const auto s = avplan::select_plan(front, rule);
    REQUIRE(s.choice.has_value() == !ok.empty());
    if (!ok.empty()) CHECK(same_profile(*s.choice, ok.front()));
  }
}

TEST_CASE("priority names") {
  CHECK(avplan::parse_priority_kind("min_ap_threshold") == PriorityKind::kMinApThreshold);
  CHECK(avplan::to_string(PriorityKind::kMaxCostThreshold) == "max_cost_threshold");
  CHECK_THROWS_AS(avplan::parse_priority_kind("fastest"), std::invalid_argument);
}

TEST_CASE("results CSV round-trip") {
  const auto draws = synthetic_draws(12, 200);
  const auto plans = avplan::enumerate_plans({avplan::ProcessModel::kHpp, {10}, {20, 40, 10}, 5});
  const auto rows = avplan::classify_plans(avplan::evaluate_grid(plans, draws, hpp_setting()),
                                           {0.3, std::nullopt});
  const auto text = avplan::write_results_csv(rows);
  CHECK(text.rfind("model,n_t,tau_t,c,tau_total,cr,pr,ap,feasible,on_front\n", 0) == 0);
  const auto back = avplan::read_results_csv(text);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].profile.plan == rows[i].profile.plan);
    CHECK(back[i].profile.cr == rows[i].profile.cr);
    CHECK(back[i].profile.pr == rows[i].profile.pr);
    CHECK(back[i].profile.ap == rows[i].profile.ap);
    CHECK(back[i].profile.cost == rows[i].profile.cost);
    CHECK(back[i].feasible == rows[i].feasible);
    CHECK(back[i].on_front == rows[i].on_front);
  }
  CHECK_THROWS_AS(avplan::read_results_csv(
                      "model,n_t,tau_t,c,tau_total,cr,pr,ap,feasible,on_front\n"
                      "hpp,1,2,3,2,0.1,0.1,0.1,yes,false\n"),
                  avplan::DataError);
  CHECK_THROWS_AS(avplan::read_results_csv(
                      "model,n_t,tau_t,c,tau_total,cr,pr,ap,feasible,on_front\n"
                      "weibull,1,2,3,2,0.1,0.1,0.1,true,false\n"),
                  avplan::DataError);
}

}  // TEST_SUITE
