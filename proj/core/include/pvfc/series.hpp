#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pvfc/time.hpp"

namespace pvfc {

enum class Unit { megawatt, watt_per_m2, dimensionless, joule_per_m2_cum };

std::string unit_name(Unit u);
Unit unit_from_name(const std::string& name);

/// The universal carrier: a UTC-indexed 15-minute series with a validity
/// mask. A value at timestamp t describes the slot [t, t+15min).
struct TimeSeries15 {
  utc_time start{};
  std::vector<double> values;
  std::vector<std::uint8_t> valid;
  Unit unit = Unit::dimensionless;

  TimeSeries15() = default;
  TimeSeries15(utc_time start, std::vector<double> values, std::vector<std::uint8_t> valid,
               Unit unit);

  static TimeSeries15 masked(utc_time start, std::size_t n, Unit unit);
  static TimeSeries15 constant(utc_time start, std::size_t n, double value, Unit unit);

  std::size_t size() const { return values.size(); }
  TimeGrid grid() const { return TimeGrid{start, values.size(), kStep15}; }
  utc_time time_at(std::size_t i) const { return start + kStep15 * static_cast<std::int64_t>(i); }
  bool is_valid(std::size_t i) const { return valid[i] != 0; }

  void set(std::size_t i, double v) {
    values[i] = v;
    valid[i] = 1;
  }
  void mask(std::size_t i) {
    values[i] = 0.0;
    valid[i] = 0;
  }

  std::size_t count_valid() const;
  /// Restrict to [begin, end); timestamps outside this series come back masked.
  TimeSeries15 slice(utc_time begin, utc_time end) const;
};

/// Throws when the two series do not share start/length.
void require_same_grid(const TimeSeries15& a, const TimeSeries15& b, const std::string& what);

/// A parsed series still on its native acquisition step (e.g. 10 min).
struct RawSeries {
  utc_time start{};
  seconds step{600};
  std::vector<double> values;
  std::vector<std::uint8_t> valid;
  Unit unit = Unit::megawatt;

  std::size_t size() const { return values.size(); }
  utc_time time_at(std::size_t i) const { return start + step * static_cast<std::int64_t>(i); }
};

/// Hour-marked cumulated energy (J/m²). cum[i] is the energy accumulated
/// from origin() through first + i hours; the origin itself carries an
/// implicit 0 and is one hour before the first mark.
struct HourlyCumSeries {
  utc_time first{};  // first hour mark, aligned to the hour
  std::vector<double> cum;
  std::vector<std::uint8_t> valid;

  std::size_t size() const { return cum.size(); }
  utc_time origin() const { return first - kStepHour; }
  utc_time mark_at(std::size_t i) const { return first + kStepHour * static_cast<std::int64_t>(i); }
  bool is_valid(std::size_t i) const { return valid[i] != 0; }
};

}  // namespace pvfc
