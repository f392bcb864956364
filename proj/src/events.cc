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

#include "avplan/events.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "avplan/error.h"
#include "csv_util.h"

namespace avplan {
namespace {

using std::chrono::sys_days;

constexpr double kMilesPerKMile = 1000.0;
constexpr double kBisectionTolerance = 1e-10;

long day_index(Date date, Date study_start) {
  return (sys_days{date} - sys_days{study_start}).count() + 1;
}

Date date_at(long index, Date study_start) {
  return Date{sys_days{study_start} + std::chrono::days{index - 1}};
}

class Fnv1a {
 public:
  void add(const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ = (hash_ ^ bytes[i]) * 1099511628211ULL;
    }
  }
  void add(double v) { add(&v, sizeof v); }
  void add(const std::string& s) {
    add(s.data(), s.size());
    add("\0", 1);
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 14695981039346656037ULL;
};

// A monthly total m with m / divisor == per_day exactly, so that the reader's
// division reproduces the stored daily value. Falls back to the rounded
// product when no neighbour within a few ulps divides back.
double exact_monthly_total(double per_day, double divisor) {
  const double product = per_day * divisor;
  double down = product;
  double up = product;
  for (int i = 0; i < 8; ++i) {
    if (up / divisor == per_day) return up;
    if (down / divisor == per_day) return down;
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    down = std::nextafter(down, 0.0);
  }
  return product;
}

}  // namespace

Date parse_iso_date(std::string_view text) {
  auto bad = [&] {
    return DataError(fmt::format("'{}' is not a YYYY-MM-DD date", text));
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  auto number = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, v);
    if (ec != std::errc() || ptr != text.data() + pos + len) throw bad();
    return v;
  };
  Date date{std::chrono::year{number(0, 4)},
            std::chrono::month{static_cast<unsigned>(number(5, 2))},
            std::chrono::day{static_cast<unsigned>(number(8, 2))}};
  if (!date.ok()) throw bad();
  return date;
}

std::string format_iso_date(Date date) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()),
                     static_cast<unsigned>(date.month()),
                     static_cast<unsigned>(date.day()));
}

int days_in_month(int year, unsigned month) {
  if (month < 1 || month > 12) {
    throw std::invalid_argument(fmt::format("month {} out of range", month));
  }
  std::chrono::year_month_day_last last{
      std::chrono::year{year} / std::chrono::month{month} / std::chrono::last};
  return static_cast<int>(static_cast<unsigned>(last.day()));
}

std::size_t horizon_day_count(double horizon_days) {
  return static_cast<std::size_t>(std::ceil(horizon_days));
}

std::size_t RecurrentDataset::total_events() const {
  std::size_t n = 0;
  for (const auto& u : units) n += u.event_count();
  return n;
}

void RecurrentDataset::validate() const {
  if (!(std::isfinite(horizon_days) && horizon_days >= 0.0)) {
    throw DataError(fmt::format("horizon must be >= 0, got {}", horizon_days));
  }
  const std::size_t days = horizon_day_count(horizon_days);
  std::set<std::string> seen;
  for (const auto& u : units) {
    if (!seen.insert(u.unit_id).second) {
      throw DataError(fmt::format("duplicate unit '{}'", u.unit_id));
    }
    if (u.mileage.daily_miles.size() != days) {
      throw DataError(fmt::format(
          "unit '{}': mileage covers {} days, horizon needs {}", u.unit_id,
          u.mileage.daily_miles.size(), days));
    }
    for (double x : u.mileage.daily_miles) {
      if (!(std::isfinite(x) && x >= 0.0)) {
        throw DataError(fmt::format("unit '{}': negative or non-finite mileage",
                                    u.unit_id));
      }
    }
    double previous = 0.0;
    for (double t : u.event_days) {
      if (!(t > 0.0 && t <= horizon_days)) {
        throw DataError(fmt::format("unit '{}': event at {} outside (0, {}]",
                                    u.unit_id, t, horizon_days));
      }
      if (t < previous) {
        throw DataError(fmt::format("unit '{}': event days not sorted", u.unit_id));
      }
      previous = t;
    }
  }
}

std::uint64_t RecurrentDataset::fingerprint() const {
  Fnv1a h;
  h.add(horizon_days);
  for (const auto& u : units) {
    h.add(u.unit_id);
    for (double t : u.event_days) h.add(t);
    for (double x : u.mileage.daily_miles) h.add(x);
  }
  return h.value();
}

std::vector<MileageProfile> derive_daily_mileage(
    std::span<const MonthlyMileage> monthly, Date study_start,
    double horizon_days) {
  if (!(std::isfinite(horizon_days) && horizon_days >= 0.0)) {
    throw std::invalid_argument(
        fmt::format("horizon must be >= 0, got {}", horizon_days));
  }
  const std::size_t days = horizon_day_count(horizon_days);
  std::vector<MileageProfile> profiles;
  std::unordered_map<std::string, std::size_t> index;
  std::set<std::tuple<std::string, int, unsigned>> months_seen;

  for (const auto& rec : monthly) {
    if (!(std::isfinite(rec.miles) && rec.miles >= 0.0)) {
      throw DataError(fmt::format("unit '{}' {}-{:02d}: negative miles {}",
                                  rec.unit_id, rec.year, rec.month, rec.miles));
    }
    if (rec.month < 1 || rec.month > 12) {
      throw DataError(fmt::format("unit '{}': month {} out of range",
                                  rec.unit_id, rec.month));
    }
    if (!months_seen.emplace(rec.unit_id, rec.year, rec.month).second) {
      throw DataError(fmt::format("unit '{}': duplicate record for {}-{:02d}",
                                  rec.unit_id, rec.year, rec.month));
    }
    auto [it, inserted] = index.try_emplace(rec.unit_id, profiles.size());
    if (inserted) {
      profiles.push_back(
          MileageProfile{rec.unit_id, std::vector<double>(days, 0.0)});
    }
    auto& daily = profiles[it->second].daily_miles;

    const int dim = days_in_month(rec.year, rec.month);
    const double per_day = rec.miles / (kMilesPerKMile * dim);
    const Date first{std::chrono::year{rec.year}, std::chrono::month{rec.month},
                     std::chrono::day{1}};
    const long first_index = day_index(first, study_start);
    for (long d = 0; d < dim; ++d) {
      const long k = first_index + d;
      if (k >= 1 && static_cast<std::size_t>(k) <= days) daily[k - 1] = per_day;
    }
  }
  return profiles;
}

std::vector<MonthlyMileage> parse_mileage_csv(std::string_view text) {
  constexpr std::string_view what = "mileage CSV";
  std::vector<MonthlyMileage> out;
  for (const auto& row : csv::read(text, {"vin", "year", "month", "miles"}, what)) {
    if (row.fields[0].empty()) {
      throw DataError(fmt::format("{}: line {}: empty vin", what, row.line));
    }
    const long year = csv::to_long(row.fields[1], row.line, what);
    const long month = csv::to_long(row.fields[2], row.line, what);
    if (month < 1 || month > 12 || year < 1 || year > 9999) {
      throw DataError(fmt::format("{}: line {}: invalid year/month {}/{}", what,
                                  row.line, year, month));
    }
    const double miles = csv::to_double(row.fields[3], row.line, what);
    if (miles < 0.0) {
      throw DataError(
          fmt::format("{}: line {}: negative miles {}", what, row.line, miles));
    }
    out.push_back(MonthlyMileage{std::string(row.fields[0]),
                                 static_cast<int>(year),
                                 static_cast<unsigned>(month), miles});
  }
  return out;
}

std::vector<EventRecord> parse_events_csv(std::string_view text,
                                          Date study_start) {
  constexpr std::string_view what = "events CSV";
  std::vector<EventRecord> out;
  for (const auto& row : csv::read(text, {"vin", "date"}, what)) {
    if (row.fields[0].empty()) {
      throw DataError(fmt::format("{}: line {}: empty vin", what, row.line));
    }
    Date date;
    try {
      date = parse_iso_date(row.fields[1]);
    } catch (const DataError& e) {
      throw DataError(fmt::format("{}: line {}: {}", what, row.line, e.what()));
    }
    out.push_back(EventRecord{std::string(row.fields[0]),
                              static_cast<double>(day_index(date, study_start))});
  }
  return out;
}

RecurrentDataset parse_events(std::string_view events_csv,
                              std::string_view mileage_csv, double horizon_days,
                              Date study_start) {
  if (!(std::isfinite(horizon_days) && horizon_days > 0.0)) {
    throw std::invalid_argument(
        fmt::format("horizon must be > 0, got {}", horizon_days));
  }
  const auto monthly = parse_mileage_csv(mileage_csv);
  auto profiles = derive_daily_mileage(monthly, study_start, horizon_days);

  RecurrentDataset data;
  data.horizon_days = horizon_days;
  std::unordered_map<std::string, std::size_t> index;
  for (auto& p : profiles) {
    index.emplace(p.unit_id, data.units.size());
    data.units.push_back(UnitHistory{p.unit_id, {}, std::move(p)});
  }
  for (const auto& ev : parse_events_csv(events_csv, study_start)) {
    auto it = index.find(ev.unit_id);
    if (it == index.end()) {
      throw DataError(fmt::format(
          "event on {} for unit '{}' which has no mileage records",
          format_iso_date(date_at(static_cast<long>(ev.event_day), study_start)),
          ev.unit_id));
    }
    if (!(ev.event_day > 0.0 && ev.event_day <= horizon_days)) {
      throw DataError(fmt::format(
          "event on {} for unit '{}' is outside the study window of {} days",
          format_iso_date(date_at(static_cast<long>(ev.event_day), study_start)),
          ev.unit_id, horizon_days));
    }
    data.units[it->second].event_days.push_back(ev.event_day);
  }
  for (auto& u : data.units) std::sort(u.event_days.begin(), u.event_days.end());
  data.validate();
  return data;
}

std::string write_events_csv(const RecurrentDataset& data, Date study_start) {
  std::string out = "vin,date\n";
  for (const auto& u : data.units) {
    for (double t : u.event_days) {
      if (t != std::floor(t)) {
        throw DataError(fmt::format(
            "unit '{}': event time {} is not a whole day", u.unit_id, t));
      }
      out += fmt::format("{},{}\n", u.unit_id,
                         format_iso_date(date_at(static_cast<long>(t), study_start)));
    }
  }
  return out;
}

std::string write_mileage_csv(const RecurrentDataset& data, Date study_start) {
  std::string out = "vin,year,month,miles\n";
  const std::size_t days = horizon_day_count(data.horizon_days);
  if (days == 0) return out;
  const Date last = date_at(static_cast<long>(days), study_start);
  for (const auto& u : data.units) {
    auto ym = study_start.year() / study_start.month();
    const auto end_ym = last.year() / last.month();
    while (ym <= end_ym) {
      const int year = static_cast<int>(ym.year());
      const unsigned month = static_cast<unsigned>(ym.month());
      const int dim = days_in_month(year, month);
      const long first = day_index(Date{ym / std::chrono::day{1}}, study_start);
      bool constant = true;
      double value = -1.0;
      double sum = 0.0;
      for (long k = std::max(first, 1L);
           k < first + dim && static_cast<std::size_t>(k) <= days; ++k) {
        const double x = u.mileage.daily_miles[k - 1];
        if (value < 0.0) value = x;
        constant = constant && x == value;
        sum += x;
      }
      // A constant month round-trips through the per-day division; a
      // non-constant one is written as its in-window total.
      const double miles = constant ? exact_monthly_total(value, kMilesPerKMile * dim)
                                    : sum * kMilesPerKMile;
      out += fmt::format("{},{},{},{}\n", u.unit_id, year, month, miles);
      ym += std::chrono::months{1};
    }
  }
  return out;
}

RecurrentDataset simulate_nhpp(const WeibullGrowthParams& theta,
                               const MileageProfile& mileage_template,
                               std::size_t n_units, double horizon_days,
                               std::uint64_t seed, TimeResolution resolution) {
  theta.validate();
  if (!(std::isfinite(horizon_days) && horizon_days > 0.0)) {
    throw std::invalid_argument(
        fmt::format("horizon must be > 0, got {}", horizon_days));
  }
  if (n_units < 1) throw std::invalid_argument("n_units must be >= 1");
  const std::size_t days = horizon_day_count(horizon_days);
  if (mileage_template.daily_miles.size() < days) {
    throw std::invalid_argument(fmt::format(
        "mileage template covers {} days, horizon needs {}",
        mileage_template.daily_miles.size(), days));
  }
  const std::vector<double> daily(mileage_template.daily_miles.begin(),
                                  mileage_template.daily_miles.begin() + days);

  // cumulative[k] = Lambda_i at the end of day k (day `days` ends at horizon).
  auto day_end = [&](std::size_t k) {
    return std::min(static_cast<double>(k), horizon_days);
  };
  std::vector<double> cumulative(days + 1, 0.0);
  for (std::size_t k = 1; k <= days; ++k) {
    const double x = daily[k - 1];
    cumulative[k] = cumulative[k - 1] +
                    (x == 0.0 ? 0.0
                              : x * cbif_increment(static_cast<double>(k - 1),
                                                   day_end(k), theta));
  }
  const double total = cumulative[days];

  RecurrentDataset data;
  data.horizon_days = horizon_days;
  data.units.reserve(n_units);
  for (std::size_t i = 0; i < n_units; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i),
                      static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 rng(seq);

    UnitHistory unit;
    unit.unit_id = fmt::format("SIM{:05d}", i + 1);
    unit.mileage = MileageProfile{unit.unit_id, daily};
    if (total > 0.0) {
      std::poisson_distribution<long> count_dist(total);
      const long count = count_dist(rng);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::vector<double> targets(static_cast<std::size_t>(count));
      for (auto& v : targets) v = unif(rng) * total;
      std::sort(targets.begin(), targets.end());
      for (double v : targets) {
        // First day whose end-of-day cumulative reaches v, then bisection on
        // the within-day increment.
        auto it = std::lower_bound(cumulative.begin() + 1, cumulative.end(), v);
        if (it == cumulative.end()) --it;
        const auto k = static_cast<std::size_t>(it - cumulative.begin());
        const double x = daily[k - 1];
        double lo = static_cast<double>(k - 1);
        double hi = day_end(k);
        while (hi - lo > kBisectionTolerance) {
          const double mid = 0.5 * (lo + hi);
          const double at_mid =
              cumulative[k - 1] + x * cbif_increment(static_cast<double>(k - 1), mid, theta);
          if (at_mid < v) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        double t = hi;
        if (resolution == TimeResolution::kDay) {
          t = std::min(std::ceil(t), horizon_days);
        }
        unit.event_days.push_back(t);
      }
    }
    data.units.push_back(std::move(unit));
  }
  return data;
}

}  // namespace avplan
