#include "pvfc/geo_solar.hpp"

#include <cmath>
#include <stdexcept>

namespace pvfc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
constexpr double kEarthRadiusKm = 6371.0;
constexpr double kCos85 = 0.08715574274765817;  // projection-ratio floor

double wrap360(double deg) {
  double d = std::fmod(deg, 360.0);
  return d < 0 ? d + 360.0 : d;
}

}  // namespace

GeoPoint::GeoPoint(double lat, double lon) : latitude_deg(lat), longitude_deg(lon) {
  if (!std::isfinite(lat) || lat < -90.0 || lat > 90.0)
    throw std::invalid_argument("latitude out of [-90, 90]: " + std::to_string(lat));
  if (!std::isfinite(lon) || lon < -180.0 || lon >= 180.0)
    throw std::invalid_argument("longitude out of [-180, 180): " + std::to_string(lon));
}

PanelOrientation::PanelOrientation(double tilt, double azimuth)
    : tilt_deg(tilt), azimuth_deg(wrap360(azimuth)) {
  if (!std::isfinite(tilt) || tilt < 0.0 || tilt > 90.0)
    throw std::invalid_argument("tilt out of [0, 90]: " + std::to_string(tilt));
}

SolarPosition solar_position(const GeoPoint& point, utc_time t) {
  using namespace std::chrono;
  const auto dp = floor<days>(t);
  const year_month_day ymd{dp};
  const int y = static_cast<int>(ymd.year());
  if (y < 1950 || y > 2100)
    throw std::out_of_range("solar_position: timestamp year " + std::to_string(y) +
                            " outside [1950, 2100]");
  const auto doy = (dp - sys_days{ymd.year() / January / 1}).count() + 1;
  const double sec_of_day = static_cast<double>((t - dp).count());
  const double hour = sec_of_day / 3600.0;

  // Spencer's Fourier series for the fractional year.
  const double g = 2.0 * kPi / 365.0 * (doy - 1 + (hour - 12.0) / 24.0);
  const double eqtime_min =
      229.18 * (0.000075 + 0.001868 * std::cos(g) - 0.032077 * std::sin(g) -
                0.014615 * std::cos(2 * g) - 0.040849 * std::sin(2 * g));
  const double decl =
      0.006918 - 0.399912 * std::cos(g) + 0.070257 * std::sin(g) - 0.006758 * std::cos(2 * g) +
      0.000907 * std::sin(2 * g) - 0.002697 * std::cos(3 * g) + 0.00148 * std::sin(3 * g);

  // True solar time in minutes; input time is UTC so the meridian offset is
  // just 4 min per degree of longitude.
  const double tst = hour * 60.0 + eqtime_min + 4.0 * point.longitude_deg;
  const double hour_angle = (tst / 4.0 - 180.0) * kDegToRad;

  const double lat = point.latitude_deg * kDegToRad;
  const double cos_z = std::sin(lat) * std::sin(decl) +
                       std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
  const double z = std::acos(std::clamp(cos_z, -1.0, 1.0));

  // Azimuth clockwise from north; both atan2 arguments scaled by sin(z).
  const double sin_az = -std::cos(decl) * std::sin(hour_angle);
  const double cos_az = (std::sin(decl) - std::sin(lat) * cos_z) / std::cos(lat);
  double az = std::atan2(sin_az, cos_az) / kDegToRad;
  if (std::sin(z) < 1e-9) az = 180.0;  // sun at the zenith: azimuth undefined, pick south
  return SolarPosition{z / kDegToRad, wrap360(az)};
}

double clearsky_ghi(const SolarPosition& pos) {
  const double z = pos.zenith_deg * kDegToRad;
  if (pos.zenith_deg >= 90.0) return 0.0;
  const double cos_z = std::cos(z);
  if (cos_z <= 0.0) return 0.0;
  return 1098.0 * cos_z * std::exp(-0.059 / cos_z);
}

double transpose_to_plane(double ghi, const SolarPosition& pos, const PanelOrientation& orient,
                          double diffuse_fraction) {
  if (ghi < 0.0) throw std::invalid_argument("transpose_to_plane: negative GHI");
  if (diffuse_fraction < 0.0 || diffuse_fraction > 1.0)
    throw std::invalid_argument("transpose_to_plane: diffuse_fraction outside [0, 1]");
  if (ghi == 0.0) return 0.0;
  const double z = pos.zenith_deg * kDegToRad;
  const double tilt = orient.tilt_deg * kDegToRad;
  const double cos_aoi = std::cos(z) * std::cos(tilt) +
                         std::sin(z) * std::sin(tilt) *
                             std::cos((pos.azimuth_deg - orient.azimuth_deg) * kDegToRad);
  const double beam = ghi * (1.0 - diffuse_fraction) * std::max(0.0, cos_aoi) /
                      std::max(std::cos(z), kCos85);
  const double diffuse = ghi * diffuse_fraction * (1.0 + std::cos(tilt)) / 2.0;
  return beam + diffuse;
}

ClearSkyProfile clearsky_profile(const GeoPoint& point,
                                 const std::optional<PanelOrientation>& orient,
                                 const TimeGrid& span, double diffuse_fraction) {
  if (span.size == 0) throw std::invalid_argument("clearsky_profile: empty span");
  if (span.step != kStep15)
    throw std::invalid_argument("clearsky_profile: span must be on the 15-min grid");
  TimeSeries15 out = TimeSeries15::masked(span.start, span.size, Unit::watt_per_m2);
  for (std::size_t i = 0; i < span.size; ++i) {
    const SolarPosition pos = solar_position(point, span.at(i));
    double v = clearsky_ghi(pos);
    if (orient && v > 0.0) v = transpose_to_plane(v, pos, *orient, diffuse_fraction);
    out.set(i, pos.zenith_deg >= 90.0 ? 0.0 : v);
  }
  return ClearSkyProfile{std::move(out), orient.has_value()};
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = a.latitude_deg * kDegToRad;
  const double lat2 = b.latitude_deg * kDegToRad;
  const double dlat = lat2 - lat1;
  const double dlon = (b.longitude_deg - a.longitude_deg) * kDegToRad;
  const double s = std::sin(dlat / 2);
  const double t = std::sin(dlon / 2);
  const double h = s * s + std::cos(lat1) * std::cos(lat2) * t * t;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

}  // namespace pvfc
