#pragma once

#include <map>
#include <string>
#include <vector>

#include "pvfc/geo_solar.hpp"
#include "pvfc/series.hpp"

namespace pvfc {

struct SiteMetadata {
  std::string site_id;
  GeoPoint location;
  PanelOrientation orientation;
  double panel_area_m2 = 0.0;
  double installed_power_mw = 0.0;

  void validate() const;
};

struct PixelCell {
  int lat_idx = 0;
  int lon_idx = 0;
  auto operator<=>(const PixelCell&) const = default;
};

/// Dense stack of geolocated GHI frames on a regular lat/lon grid,
/// one frame per 15-min timestamp. Flat layout: (time, lat, lon).
struct GridStack {
  std::vector<double> lat_axis;  // ascending cell-center degrees
  std::vector<double> lon_axis;
  utc_time start{};
  std::size_t n_times = 0;
  std::vector<double> ghi;
  std::vector<std::uint8_t> valid;

  std::size_t n_lat() const { return lat_axis.size(); }
  std::size_t n_lon() const { return lon_axis.size(); }
  std::size_t n_cells() const { return n_lat() * n_lon(); }
  std::size_t flat(std::size_t t, std::size_t i, std::size_t j) const {
    return (t * n_lat() + i) * n_lon() + j;
  }
  TimeGrid grid() const { return TimeGrid{start, n_times, kStep15}; }
  GeoPoint cell_center(const PixelCell& c) const {
    return GeoPoint(lat_axis[static_cast<std::size_t>(c.lat_idx)],
                    lon_axis[static_cast<std::size_t>(c.lon_idx)]);
  }
};

/// One NWP run: SSRD accumulated since issue time, per hourly lead and grid
/// cell. Flat layout: (lead, lat, lon).
struct NwpRun {
  std::string model_tag;
  utc_time issue{};
  std::vector<int> lead_hours;  // ascending, >= 1
  std::vector<double> lat_axis;
  std::vector<double> lon_axis;
  std::vector<double> ssrd_cum;
  std::vector<std::uint8_t> valid;

  std::size_t n_lat() const { return lat_axis.size(); }
  std::size_t n_lon() const { return lon_axis.size(); }
  std::size_t flat(std::size_t l, std::size_t i, std::size_t j) const {
    return (l * n_lat() + i) * n_lon() + j;
  }
};

// ---- file formats (long CSV, UTF-8, '.' decimal, empty field = missing) ----

/// `site_id,lat,lon,tilt_deg,azimuth_deg,panel_area_m2,installed_power_mw`
std::vector<SiteMetadata> parse_site_metadata_csv(const std::string& path);
void write_site_metadata_csv(const std::string& path, const std::vector<SiteMetadata>& sites);

/// `site_id,timestamp_utc,power_mw`; rows per site on a uniform native grid
/// (step inferred, gaps masked). Returns one RawSeries (unit MW) per site.
std::map<std::string, RawSeries> parse_production_csv(const std::string& path);
void write_production_csv(const std::string& path,
                          const std::map<std::string, TimeSeries15>& per_site);

/// `timestamp_utc,lat,lon,ghi_wm2`; duplicate (t,lat,lon) or negative GHI are
/// errors; absent combinations come back masked.
GridStack parse_satellite_csv(const std::string& path);
void write_satellite_csv(const std::string& path, const GridStack& grid);

/// `model,issue_time_utc,lead_hours,lat,lon,ssrd_jm2`; one NwpRun per
/// (model, issue_time); cumulated SSRD must be non-decreasing in lead.
std::vector<NwpRun> parse_nwp_csv(const std::string& path);
void write_nwp_csv(const std::string& path, const std::vector<NwpRun>& runs);

// ---- operations ----

/// Linear interpolation onto the 15-min grid. A 15-min point is valid only
/// if both bracketing native points are valid (one suffices when it lands
/// exactly on a native point).
TimeSeries15 resample_to_15min(const RawSeries& native);

inline constexpr double kZeroThreshold = 1e-6;       // "production shutdown" level
inline constexpr double kDaylightThresholdWm2 = 10;  // clear-sky level defining daylight

/// Masks every UTC day that looks like a production shutdown: some daylight
/// exists (clear-sky > threshold) and no valid daylight sample exceeds the
/// zero threshold. Idempotent.
TimeSeries15 quality_check_days(const TimeSeries15& series, const ClearSkyProfile& cs,
                                double zero_threshold = kZeroThreshold,
                                double daylight_threshold = kDaylightThresholdWm2);

/// MW -> W/m² using the site panel area.
TimeSeries15 mw_to_wm2(const TimeSeries15& series, const SiteMetadata& meta);

/// One cell's GHI across all frames.
TimeSeries15 pixel_series(const GridStack& grid, const PixelCell& cell);

/// Index of the grid cell whose center is nearest to `p` (haversine).
PixelCell nearest_cell(const std::vector<double>& lat_axis, const std::vector<double>& lon_axis,
                       const GeoPoint& p);

/// Most-recent-run hourly series at one NWP grid cell, re-based to a common
/// accumulation origin (the hour before `first_mark`). For each hour window
/// the increment comes from the latest run issued at or before the window
/// start; windows no run covers are masked. All runs must share model_tag
/// and grid axes.
HourlyCumSeries latest_run_series(const std::vector<NwpRun>& runs, const PixelCell& cell,
                                  utc_time first_mark, std::size_t n_hours);

/// Hourly cumulated SSRD -> 15-min GHI via the clear-sky-shaped downscaling:
/// (1) normalize the hourly cumulated energy by the hourly-cumulated
/// clear-sky energy (marks before the first daylight hour take the first
/// defined ratio; 0/0 -> 0 when the whole span is dark), (2) interpolate the
/// ratio linearly to 15 min, (3) multiply by the 15-min cumulated clear-sky
/// energy, (4) difference consecutive values and divide by 900 s.
/// `cs` must be horizontal and cover exactly the hourly span (4 slots/hour).
TimeSeries15 downscale_ssrd(const HourlyCumSeries& hourly, const ClearSkyProfile& cs);

}  // namespace pvfc
