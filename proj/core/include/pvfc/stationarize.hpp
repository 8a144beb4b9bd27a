#pragma once

#include "pvfc/geo_solar.hpp"
#include "pvfc/series.hpp"

namespace pvfc {

inline constexpr double kDefaultEpsFloorWm2 = 20.0;

/// A clear-sky index series: physical values divided by the clear-sky
/// profile, masked wherever the clear sky is below eps_floor.
struct NormalizedSeries {
  TimeSeries15 index;  // dimensionless
  ClearSkyProfile cs_ref;
  double eps_floor = kDefaultEpsFloorWm2;
};

/// index_t = value_t / cs_t where cs_t > eps_floor; masked otherwise.
NormalizedSeries normalize(const TimeSeries15& series, const ClearSkyProfile& cs,
                           double eps_floor = kDefaultEpsFloorWm2);

/// value_t = index_t * cs_t; masked points stay masked.
TimeSeries15 denormalize(const NormalizedSeries& norm);

}  // namespace pvfc
