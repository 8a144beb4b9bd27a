#pragma once

#include <optional>

#include "pvfc/series.hpp"
#include "pvfc/time.hpp"

namespace pvfc {

struct GeoPoint {
  double latitude_deg = 0.0;   // [-90, 90]
  double longitude_deg = 0.0;  // [-180, 180)

  GeoPoint() = default;
  GeoPoint(double lat, double lon);
};

/// Zenith in [0, 180], azimuth in [0, 360) measured clockwise from north.
struct SolarPosition {
  double zenith_deg = 0.0;
  double azimuth_deg = 0.0;
};

struct PanelOrientation {
  double tilt_deg = 0.0;     // [0, 90], 0 = horizontal
  double azimuth_deg = 180;  // [0, 360), 180 = facing south

  PanelOrientation() = default;
  PanelOrientation(double tilt, double azimuth);
};

/// A clear-sky irradiance series, tagged with the surface it refers to.
struct ClearSkyProfile {
  TimeSeries15 series;  // W/m², all values >= 0, exactly 0 at night
  bool plane_of_array = false;
};

/// Low-precision analytic ephemeris (declination + equation of time from a
/// day-of-year Fourier series, then the hour angle). Zenith accurate to
/// about 0.2-0.5 degrees, which is plenty for a clear-sky normalizer.
/// Throws std::out_of_range outside years 1950-2100.
SolarPosition solar_position(const GeoPoint& point, utc_time t);

/// Haurwitz clear-sky global horizontal irradiance:
/// 1098 * cos(z) * exp(-0.059 / cos(z)) for zenith < 90°, else 0.
double clearsky_ghi(const SolarPosition& pos);

/// Isotropic transposition of GHI to the panel plane. The beam term uses the
/// projection ratio cos(AOI)/cos(z) with cos(z) floored at cos(85°) to avoid
/// the near-horizon blow-up; the diffuse term is ghi * d * (1+cos(tilt))/2.
double transpose_to_plane(double ghi, const SolarPosition& pos, const PanelOrientation& orient,
                          double diffuse_fraction);

inline constexpr double kDefaultDiffuseFraction = 0.3;

/// Clear-sky profile over a 15-min grid: plane-of-array when an orientation
/// is given, horizontal otherwise. Throws on an empty span.
ClearSkyProfile clearsky_profile(const GeoPoint& point,
                                 const std::optional<PanelOrientation>& orient, const TimeGrid& span,
                                 double diffuse_fraction = kDefaultDiffuseFraction);

/// Great-circle distance, Earth radius 6371 km.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

}  // namespace pvfc
