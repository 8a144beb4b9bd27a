#include "pvfc/stationarize.hpp"

#include <stdexcept>

namespace pvfc {

NormalizedSeries normalize(const TimeSeries15& series, const ClearSkyProfile& cs,
                           double eps_floor) {
  require_same_grid(series, cs.series, "normalize");
  if (series.unit != Unit::watt_per_m2)
    throw std::invalid_argument("normalize: input must be W/m², got " + unit_name(series.unit));
  NormalizedSeries out;
  out.index = TimeSeries15::masked(series.start, series.size(), Unit::dimensionless);
  out.cs_ref = cs;
  out.eps_floor = eps_floor;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!series.is_valid(i) || !cs.series.is_valid(i)) continue;
    const double c = cs.series.values[i];
    if (c > eps_floor) out.index.set(i, series.values[i] / c);
  }
  return out;
}

TimeSeries15 denormalize(const NormalizedSeries& norm) {
  require_same_grid(norm.index, norm.cs_ref.series, "denormalize");
  TimeSeries15 out = TimeSeries15::masked(norm.index.start, norm.index.size(), Unit::watt_per_m2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!norm.index.is_valid(i) || !norm.cs_ref.series.is_valid(i)) continue;
    out.set(i, norm.index.values[i] * norm.cs_ref.series.values[i]);
  }
  return out;
}

}  // namespace pvfc
