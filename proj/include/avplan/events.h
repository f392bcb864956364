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

// Recurrent disengagement-events data: CSV ingestion, daily mileage
// derivation from monthly totals, and NHPP simulation.
//
// Events CSV:  vin,date              (date is YYYY-MM-DD)
// Mileage CSV: vin,year,month,miles  (statute miles per calendar month)
//
// A date maps to day index (date - study_start + 1), so an event on the
// study start date is at t = 1. Mileage is stored internally in k-miles.

#ifndef AVPLAN_EVENTS_H_
#define AVPLAN_EVENTS_H_

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avplan/model.h"

namespace avplan {

using Date = std::chrono::year_month_day;

// Parses YYYY-MM-DD. Throws DataError on malformed or impossible dates.
Date parse_iso_date(std::string_view text);
std::string format_iso_date(Date date);
int days_in_month(int year, unsigned month);

struct EventRecord {
  std::string unit_id;
  double event_day = 0.0;
};

struct MonthlyMileage {
  std::string unit_id;
  int year = 0;
  unsigned month = 0;  // 1..12
  double miles = 0.0;  // statute miles
};

struct UnitHistory {
  std::string unit_id;
  std::vector<double> event_days;  // sorted, within (0, horizon]
  MileageProfile mileage;

  std::size_t event_count() const { return event_days.size(); }
};

struct RecurrentDataset {
  double horizon_days = 0.0;
  std::vector<UnitHistory> units;

  std::size_t total_events() const;
  // Throws DataError if any invariant is violated.
  void validate() const;
  // Stable content fingerprint (FNV-1a over ids, event days and mileage).
  std::uint64_t fingerprint() const;
};

// Number of days covered by a horizon: ceil(horizon_days).
std::size_t horizon_day_count(double horizon_days);

// Spreads each monthly total uniformly over the days of its month and maps
// it onto the study window [study_start, study_start + ceil(horizon) - 1].
// Days without a record get 0. Profiles appear in first-seen unit order.
std::vector<MileageProfile> derive_daily_mileage(
    std::span<const MonthlyMileage> monthly, Date study_start,
    double horizon_days);

std::vector<MonthlyMileage> parse_mileage_csv(std::string_view text);
std::vector<EventRecord> parse_events_csv(std::string_view text,
                                          Date study_start);

// Builds a dataset from the two CSV documents. Units present only in the
// mileage file get zero events.
RecurrentDataset parse_events(std::string_view events_csv,
                              std::string_view mileage_csv,
                              double horizon_days, Date study_start);

// Event days must be whole days.
std::string write_events_csv(const RecurrentDataset& data, Date study_start);
// Writes one row per unit and calendar month overlapping the window. A month
// whose in-window days share one daily value v is written as v * days_in_month
// so that re-parsing reproduces v.
std::string write_mileage_csv(const RecurrentDataset& data, Date study_start);

enum class TimeResolution {
  kDay,         // event times rounded up to the end of their day
  kContinuous,  // exact inverted event times
};

// Draws n_units independent event histories from the NHPP with intensity
// lambda0(t; theta) * x(t), every unit sharing the mileage template. Each unit
// uses its own generator seeded from (seed, unit index).
RecurrentDataset simulate_nhpp(const WeibullGrowthParams& theta,
                               const MileageProfile& mileage_template,
                               std::size_t n_units, double horizon_days,
                               std::uint64_t seed,
                               TimeResolution resolution = TimeResolution::kDay);

}  // namespace avplan

#endif  // AVPLAN_EVENTS_H_
