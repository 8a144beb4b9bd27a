#include "pvfc/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pvfc {

std::string unit_name(Unit u) {
  switch (u) {
    case Unit::megawatt: return "MW";
    case Unit::watt_per_m2: return "W/m2";
    case Unit::dimensionless: return "1";
    case Unit::joule_per_m2_cum: return "J/m2-cum";
  }
  return "?";
}

Unit unit_from_name(const std::string& name) {
  if (name == "MW") return Unit::megawatt;
  if (name == "W/m2") return Unit::watt_per_m2;
  if (name == "1") return Unit::dimensionless;
  if (name == "J/m2-cum") return Unit::joule_per_m2_cum;
  throw std::invalid_argument("unknown unit '" + name + "'");
}

TimeSeries15::TimeSeries15(utc_time start_, std::vector<double> values_,
                           std::vector<std::uint8_t> valid_, Unit unit_)
    : start(start_), values(std::move(values_)), valid(std::move(valid_)), unit(unit_) {
  if (values.size() != valid.size())
    throw std::invalid_argument("TimeSeries15: values/valid length mismatch");
  if (!aligned_to(start, kStep15))
    throw std::invalid_argument("TimeSeries15: start not aligned to :00/:15/:30/:45");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (valid[i] && !std::isfinite(values[i]))
      throw std::invalid_argument("TimeSeries15: non-finite unmasked value at index " +
                                  std::to_string(i));
}

TimeSeries15 TimeSeries15::masked(utc_time start, std::size_t n, Unit unit) {
  return TimeSeries15(start, std::vector<double>(n, 0.0), std::vector<std::uint8_t>(n, 0), unit);
}

TimeSeries15 TimeSeries15::constant(utc_time start, std::size_t n, double value, Unit unit) {
  return TimeSeries15(start, std::vector<double>(n, value), std::vector<std::uint8_t>(n, 1), unit);
}

std::size_t TimeSeries15::count_valid() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

TimeSeries15 TimeSeries15::slice(utc_time begin, utc_time end) const {
  const TimeGrid g = grid15_between(begin, end);
  TimeSeries15 out = masked(begin, g.size, unit);
  const TimeGrid self = grid();
  for (std::size_t i = 0; i < g.size; ++i) {
    const std::size_t j = self.index_of(g.at(i));
    if (j != TimeGrid::npos && valid[j]) out.set(i, values[j]);
  }
  return out;
}

void require_same_grid(const TimeSeries15& a, const TimeSeries15& b, const std::string& what) {
  if (a.start != b.start || a.size() != b.size())
    throw std::invalid_argument(what + ": series do not share the 15-min grid (" +
                                format_iso8601(a.start) + " n=" + std::to_string(a.size()) +
                                " vs " + format_iso8601(b.start) +
                                " n=" + std::to_string(b.size()) + ")");
}

}  // namespace pvfc
