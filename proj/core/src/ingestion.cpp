#include "pvfc/ingestion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "pvfc/csv.hpp"

namespace pvfc {

namespace {

constexpr const char* kSiteHeader[] = {"site_id", "lat",           "lon",
                                       "tilt_deg", "azimuth_deg",  "panel_area_m2",
                                       "installed_power_mw"};

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / std::gcd(a, b) * b; }

}  // namespace

void SiteMetadata::validate() const {
  if (site_id.empty()) throw std::invalid_argument("site metadata: empty site_id");
  if (!(panel_area_m2 > 0.0))
    throw std::invalid_argument("site " + site_id + ": panel_area_m2 must be > 0");
  if (!(installed_power_mw > 0.0))
    throw std::invalid_argument("site " + site_id + ": installed_power_mw must be > 0");
}

std::vector<SiteMetadata> parse_site_metadata_csv(const std::string& path) {
  std::vector<SiteMetadata> out;
  std::set<std::string> seen;
  csv::for_each_row(path, {std::begin(kSiteHeader), std::end(kSiteHeader)},
                    [&](const csv::Row& r) {
                      SiteMetadata m;
                      m.site_id = r.fields[0];
                      m.location = GeoPoint(csv::parse_double(r.fields[1], r.line, "lat"),
                                            csv::parse_double(r.fields[2], r.line, "lon"));
                      m.orientation =
                          PanelOrientation(csv::parse_double(r.fields[3], r.line, "tilt_deg"),
                                           csv::parse_double(r.fields[4], r.line, "azimuth_deg"));
                      m.panel_area_m2 = csv::parse_double(r.fields[5], r.line, "panel_area_m2");
                      m.installed_power_mw =
                          csv::parse_double(r.fields[6], r.line, "installed_power_mw");
                      m.validate();
                      if (!seen.insert(m.site_id).second)
                        throw std::runtime_error(path + ":" + std::to_string(r.line) +
                                                 ": duplicate site_id '" + m.site_id + "'");
                      out.push_back(std::move(m));
                    });
  return out;
}

void write_site_metadata_csv(const std::string& path, const std::vector<SiteMetadata>& sites) {
  csv::Writer w(path);
  w.header({std::begin(kSiteHeader), std::end(kSiteHeader)});
  for (const auto& s : sites) {
    w.field(s.site_id)
        .field(s.location.latitude_deg)
        .field(s.location.longitude_deg)
        .field(s.orientation.tilt_deg)
        .field(s.orientation.azimuth_deg)
        .field(s.panel_area_m2)
        .field(s.installed_power_mw);
    w.end_row();
  }
}

std::map<std::string, RawSeries> parse_production_csv(const std::string& path) {
  struct Sample {
    utc_time t;
    std::optional<double> v;
  };
  std::map<std::string, std::vector<Sample>> raw;
  csv::for_each_row(path, {"site_id", "timestamp_utc", "power_mw"}, [&](const csv::Row& r) {
    utc_time t;
    try {
      t = parse_iso8601(r.fields[1]);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(r.line) + ": " + e.what());
    }
    raw[r.fields[0]].push_back(Sample{t, csv::parse_double_opt(r.fields[2], r.line, "power_mw")});
  });

  std::map<std::string, RawSeries> out;
  for (auto& [site, samples] : raw) {
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.t < b.t; });
    for (std::size_t i = 1; i < samples.size(); ++i)
      if (samples[i].t == samples[i - 1].t)
        throw std::runtime_error(path + ": site " + site + ": duplicate timestamp " +
                                 format_iso8601(samples[i].t));
    if (samples.size() < 2)
      throw std::runtime_error(path + ": site " + site +
                               ": need at least 2 samples to infer the native step");
    std::int64_t step = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
      const auto d = (samples[i].t - samples[i - 1].t).count();
      step = step == 0 ? d : std::gcd(step, d);
    }
    RawSeries s;
    s.start = samples.front().t;
    s.step = seconds{step};
    s.unit = Unit::megawatt;
    const auto n = static_cast<std::size_t>((samples.back().t - s.start).count() / step) + 1;
    s.values.assign(n, 0.0);
    s.valid.assign(n, 0);
    for (const auto& smp : samples) {
      const auto i = static_cast<std::size_t>((smp.t - s.start).count() / step);
      if (smp.v) {
        if (!std::isfinite(*smp.v))
          throw std::runtime_error(path + ": site " + site + ": non-finite power at " +
                                   format_iso8601(smp.t));
        s.values[i] = *smp.v;
        s.valid[i] = 1;
      }
    }
    out.emplace(site, std::move(s));
  }
  return out;
}

void write_production_csv(const std::string& path,
                          const std::map<std::string, TimeSeries15>& per_site) {
  csv::Writer w(path);
  w.header({"site_id", "timestamp_utc", "power_mw"});
  for (const auto& [site, s] : per_site)
    for (std::size_t i = 0; i < s.size(); ++i) {
      w.field(site).field(format_iso8601(s.time_at(i)));
      if (s.is_valid(i))
        w.field(s.values[i]);
      else
        w.blank_field();
      w.end_row();
    }
}

TimeSeries15 resample_to_15min(const RawSeries& native) {
  const std::int64_t step = native.step.count();
  if (step <= 0 || lcm64(step, kStep15.count()) > 1800)
    throw std::invalid_argument("resample_to_15min: unsupported native step " +
                                std::to_string(step) + " s");
  if (native.size() == 0) throw std::invalid_argument("resample_to_15min: empty series");

  const auto first_epoch = native.start.time_since_epoch().count();
  const auto last = native.time_at(native.size() - 1).time_since_epoch().count();
  const auto start15 = (first_epoch + kStep15.count() - 1) / kStep15.count() * kStep15.count();
  if (start15 > last) return TimeSeries15::masked(utc_time{seconds{start15}}, 0, native.unit);
  const auto n = static_cast<std::size_t>((last - start15) / kStep15.count()) + 1;

  TimeSeries15 out = TimeSeries15::masked(utc_time{seconds{start15}}, n, native.unit);
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = start15 + static_cast<std::int64_t>(i) * kStep15.count();
    const auto off = t - first_epoch;
    const auto lo = static_cast<std::size_t>(off / step);
    if (off % step == 0) {
      if (native.valid[lo]) out.set(i, native.values[lo]);
      continue;
    }
    const std::size_t hi = lo + 1;
    if (hi >= native.size()) continue;
    if (!native.valid[lo] || !native.valid[hi]) continue;
    const double w = static_cast<double>(off - static_cast<std::int64_t>(lo) * step) / step;
    out.set(i, native.values[lo] * (1.0 - w) + native.values[hi] * w);
  }
  return out;
}

TimeSeries15 quality_check_days(const TimeSeries15& series, const ClearSkyProfile& cs,
                                double zero_threshold, double daylight_threshold) {
  require_same_grid(series, cs.series, "quality_check_days");
  TimeSeries15 out = series;
  std::size_t i = 0;
  while (i < out.size()) {
    const utc_time day = floor_day(out.time_at(i));
    std::size_t j = i;
    bool any_daylight = false;
    bool producing = false;
    for (; j < out.size() && floor_day(out.time_at(j)) == day; ++j) {
      if (cs.series.is_valid(j) && cs.series.values[j] > daylight_threshold) {
        any_daylight = true;
        if (out.is_valid(j) && out.values[j] > zero_threshold) producing = true;
      }
    }
    if (any_daylight && !producing)
      for (std::size_t k = i; k < j; ++k) out.mask(k);
    i = j;
  }
  return out;
}

TimeSeries15 mw_to_wm2(const TimeSeries15& series, const SiteMetadata& meta) {
  if (series.unit != Unit::megawatt)
    throw std::invalid_argument("mw_to_wm2: input unit is " + unit_name(series.unit) +
                                ", expected MW");
  meta.validate();
  TimeSeries15 out = series;
  out.unit = Unit::watt_per_m2;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out.is_valid(i)) out.values[i] = out.values[i] * 1e6 / meta.panel_area_m2;
  return out;
}

GridStack parse_satellite_csv(const std::string& path) {
  struct Cell {
    utc_time t;
    double lat, lon;
    std::optional<double> ghi;
    std::size_t line;
  };
  std::vector<Cell> rows;
  std::set<double> lats, lons;
  utc_time tmin = utc_time::max(), tmax = utc_time::min();
  csv::for_each_row(path, {"timestamp_utc", "lat", "lon", "ghi_wm2"}, [&](const csv::Row& r) {
    Cell c;
    try {
      c.t = parse_iso8601(r.fields[0]);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(r.line) + ": " + e.what());
    }
    if (!aligned_to(c.t, kStep15))
      throw std::runtime_error(path + ":" + std::to_string(r.line) +
                               ": timestamp not on the 15-min grid");
    c.lat = csv::parse_double(r.fields[1], r.line, "lat");
    c.lon = csv::parse_double(r.fields[2], r.line, "lon");
    c.ghi = csv::parse_double_opt(r.fields[3], r.line, "ghi_wm2");
    if (c.ghi && *c.ghi < 0.0)
      throw std::runtime_error(path + ":" + std::to_string(r.line) + ": negative GHI");
    c.line = r.line;
    lats.insert(c.lat);
    lons.insert(c.lon);
    tmin = std::min(tmin, c.t);
    tmax = std::max(tmax, c.t);
    rows.push_back(c);
  });

  GridStack g;
  g.lat_axis.assign(lats.begin(), lats.end());
  g.lon_axis.assign(lons.begin(), lons.end());
  g.start = tmin;
  g.n_times = static_cast<std::size_t>((tmax - tmin) / kStep15) + 1;
  g.ghi.assign(g.n_times * g.n_cells(), 0.0);
  g.valid.assign(g.n_times * g.n_cells(), 0);

  std::map<double, std::size_t> lat_of, lon_of;
  for (std::size_t i = 0; i < g.lat_axis.size(); ++i) lat_of[g.lat_axis[i]] = i;
  for (std::size_t j = 0; j < g.lon_axis.size(); ++j) lon_of[g.lon_axis[j]] = j;
  for (const auto& c : rows) {
    const auto t = static_cast<std::size_t>((c.t - tmin) / kStep15);
    const auto k = g.flat(t, lat_of[c.lat], lon_of[c.lon]);
    if (g.valid[k])
      throw std::runtime_error(path + ":" + std::to_string(c.line) + ": duplicate cell (" +
                               format_iso8601(c.t) + ", " + std::to_string(c.lat) + ", " +
                               std::to_string(c.lon) + ")");
    if (c.ghi) {
      g.ghi[k] = *c.ghi;
      g.valid[k] = 1;
    } else {
      g.valid[k] = 1;  // mark seen to catch duplicates, then mask below
      g.ghi[k] = -1.0;
    }
  }
  // second pass: rows with explicit missing values end up masked
  for (std::size_t k = 0; k < g.ghi.size(); ++k)
    if (g.valid[k] && g.ghi[k] < 0.0) {
      g.valid[k] = 0;
      g.ghi[k] = 0.0;
    }
  return g;
}

void write_satellite_csv(const std::string& path, const GridStack& grid) {
  csv::Writer w(path);
  w.header({"timestamp_utc", "lat", "lon", "ghi_wm2"});
  for (std::size_t t = 0; t < grid.n_times; ++t) {
    const std::string ts = format_iso8601(grid.start + kStep15 * static_cast<std::int64_t>(t));
    for (std::size_t i = 0; i < grid.n_lat(); ++i)
      for (std::size_t j = 0; j < grid.n_lon(); ++j) {
        w.field(ts).field(grid.lat_axis[i]).field(grid.lon_axis[j]);
        const auto k = grid.flat(t, i, j);
        if (grid.valid[k])
          w.field(grid.ghi[k]);
        else
          w.blank_field();
        w.end_row();
      }
  }
}

TimeSeries15 pixel_series(const GridStack& grid, const PixelCell& cell) {
  if (cell.lat_idx < 0 || static_cast<std::size_t>(cell.lat_idx) >= grid.n_lat() ||
      cell.lon_idx < 0 || static_cast<std::size_t>(cell.lon_idx) >= grid.n_lon())
    throw std::out_of_range("pixel_series: cell (" + std::to_string(cell.lat_idx) + ", " +
                            std::to_string(cell.lon_idx) + ") outside grid");
  TimeSeries15 out = TimeSeries15::masked(grid.start, grid.n_times, Unit::watt_per_m2);
  for (std::size_t t = 0; t < grid.n_times; ++t) {
    const auto k = grid.flat(t, static_cast<std::size_t>(cell.lat_idx),
                             static_cast<std::size_t>(cell.lon_idx));
    if (grid.valid[k]) out.set(t, grid.ghi[k]);
  }
  return out;
}

PixelCell nearest_cell(const std::vector<double>& lat_axis, const std::vector<double>& lon_axis,
                       const GeoPoint& p) {
  if (lat_axis.empty() || lon_axis.empty())
    throw std::invalid_argument("nearest_cell: empty grid axes");
  PixelCell best{0, 0};
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lat_axis.size(); ++i)
    for (std::size_t j = 0; j < lon_axis.size(); ++j) {
      const double d = haversine_km(GeoPoint(lat_axis[i], lon_axis[j]), p);
      if (d < best_d) {
        best_d = d;
        best = PixelCell{static_cast<int>(i), static_cast<int>(j)};
      }
    }
  return best;
}

std::vector<NwpRun> parse_nwp_csv(const std::string& path) {
  struct Entry {
    int lead;
    double lat, lon;
    std::optional<double> v;
    std::size_t line;
  };
  std::map<std::pair<std::string, utc_time>, std::vector<Entry>> groups;
  csv::for_each_row(
      path, {"model", "issue_time_utc", "lead_hours", "lat", "lon", "ssrd_jm2"},
      [&](const csv::Row& r) {
        utc_time issue;
        try {
          issue = parse_iso8601(r.fields[1]);
        } catch (const std::exception& e) {
          throw std::runtime_error(path + ":" + std::to_string(r.line) + ": " + e.what());
        }
        Entry e;
        e.lead = static_cast<int>(csv::parse_long(r.fields[2], r.line, "lead_hours"));
        if (e.lead < 1)
          throw std::runtime_error(path + ":" + std::to_string(r.line) + ": lead_hours must be >= 1");
        e.lat = csv::parse_double(r.fields[3], r.line, "lat");
        e.lon = csv::parse_double(r.fields[4], r.line, "lon");
        e.v = csv::parse_double_opt(r.fields[5], r.line, "ssrd_jm2");
        e.line = r.line;
        groups[{r.fields[0], issue}].push_back(e);
      });

  std::vector<NwpRun> runs;
  for (auto& [key, entries] : groups) {
    NwpRun run;
    run.model_tag = key.first;
    run.issue = key.second;
    std::set<int> leads;
    std::set<double> lats, lons;
    for (const auto& e : entries) {
      leads.insert(e.lead);
      lats.insert(e.lat);
      lons.insert(e.lon);
    }
    if (leads.size() < 2)
      throw std::runtime_error(path + ": run " + run.model_tag + "@" +
                               format_iso8601(run.issue) +
                               ": need >= 2 lead times to difference");
    run.lead_hours.assign(leads.begin(), leads.end());
    run.lat_axis.assign(lats.begin(), lats.end());
    run.lon_axis.assign(lons.begin(), lons.end());
    run.ssrd_cum.assign(run.lead_hours.size() * run.n_lat() * run.n_lon(), 0.0);
    run.valid.assign(run.ssrd_cum.size(), 0);
    std::map<int, std::size_t> lead_of;
    std::map<double, std::size_t> lat_of, lon_of;
    for (std::size_t l = 0; l < run.lead_hours.size(); ++l) lead_of[run.lead_hours[l]] = l;
    for (std::size_t i = 0; i < run.lat_axis.size(); ++i) lat_of[run.lat_axis[i]] = i;
    for (std::size_t j = 0; j < run.lon_axis.size(); ++j) lon_of[run.lon_axis[j]] = j;
    for (const auto& e : entries) {
      const auto k = run.flat(lead_of[e.lead], lat_of[e.lat], lon_of[e.lon]);
      if (run.valid[k])
        throw std::runtime_error(path + ":" + std::to_string(e.line) + ": duplicate NWP cell");
      if (e.v) {
        run.ssrd_cum[k] = *e.v;
        run.valid[k] = 1;
      }
    }
    // cumulated energy must not decrease with lead at any cell
    for (std::size_t i = 0; i < run.n_lat(); ++i)
      for (std::size_t j = 0; j < run.n_lon(); ++j) {
        double prev = -std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < run.lead_hours.size(); ++l) {
          const auto k = run.flat(l, i, j);
          if (!run.valid[k]) continue;
          if (run.ssrd_cum[k] < prev)
            throw std::runtime_error(path + ": run " + run.model_tag + "@" +
                                     format_iso8601(run.issue) + ": cumulated SSRD decreases at lead " +
                                     std::to_string(run.lead_hours[l]));
          prev = run.ssrd_cum[k];
        }
      }
    runs.push_back(std::move(run));
  }
  std::sort(runs.begin(), runs.end(), [](const NwpRun& a, const NwpRun& b) {
    return std::tie(a.model_tag, a.issue) < std::tie(b.model_tag, b.issue);
  });
  return runs;
}

void write_nwp_csv(const std::string& path, const std::vector<NwpRun>& runs) {
  csv::Writer w(path);
  w.header({"model", "issue_time_utc", "lead_hours", "lat", "lon", "ssrd_jm2"});
  for (const auto& run : runs) {
    const std::string issue = format_iso8601(run.issue);
    for (std::size_t l = 0; l < run.lead_hours.size(); ++l)
      for (std::size_t i = 0; i < run.n_lat(); ++i)
        for (std::size_t j = 0; j < run.n_lon(); ++j) {
          w.field(run.model_tag)
              .field(issue)
              .field(static_cast<long>(run.lead_hours[l]))
              .field(run.lat_axis[i])
              .field(run.lon_axis[j]);
          const auto k = run.flat(l, i, j);
          if (run.valid[k])
            w.field(run.ssrd_cum[k]);
          else
            w.blank_field();
          w.end_row();
        }
  }
}

HourlyCumSeries latest_run_series(const std::vector<NwpRun>& runs, const PixelCell& cell,
                                  utc_time first_mark, std::size_t n_hours) {
  if (runs.empty()) throw std::invalid_argument("latest_run_series: no runs");
  if (!aligned_to(first_mark, kStepHour))
    throw std::invalid_argument("latest_run_series: first mark must be on the hour");
  for (const auto& r : runs)
    if (r.model_tag != runs.front().model_tag || r.lat_axis != runs.front().lat_axis ||
        r.lon_axis != runs.front().lon_axis)
      throw std::invalid_argument("latest_run_series: runs mix model tags or grids");

  // runs sorted by issue, newest candidate searched first
  std::vector<const NwpRun*> by_issue;
  for (const auto& r : runs) by_issue.push_back(&r);
  std::sort(by_issue.begin(), by_issue.end(),
            [](const NwpRun* a, const NwpRun* b) { return a->issue < b->issue; });

  const auto i = static_cast<std::size_t>(cell.lat_idx);
  const auto j = static_cast<std::size_t>(cell.lon_idx);
  if (i >= runs.front().n_lat() || j >= runs.front().n_lon())
    throw std::out_of_range("latest_run_series: cell outside NWP grid");

  // Per-window increment from the newest run whose issue is at or before the
  // window start and that carries both bracketing leads; the increments are
  // re-accumulated from the common origin so consecutive marks difference
  // cleanly across run switches.
  HourlyCumSeries out;
  out.first = first_mark;
  out.cum.assign(n_hours, 0.0);
  out.valid.assign(n_hours, 0);
  double acc = 0.0;
  for (std::size_t k = 0; k < n_hours; ++k) {
    const utc_time mark = out.mark_at(k);
    const utc_time window_start = mark - kStepHour;
    bool found = false;
    for (auto it = by_issue.rbegin(); it != by_issue.rend() && !found; ++it) {
      const NwpRun& r = **it;
      if (r.issue > window_start) continue;
      const auto lead_s = (mark - r.issue).count();
      if (lead_s % kStepHour.count() != 0) continue;
      const int lead = static_cast<int>(lead_s / kStepHour.count());
      const auto pos = std::lower_bound(r.lead_hours.begin(), r.lead_hours.end(), lead);
      if (pos == r.lead_hours.end() || *pos != lead) continue;
      const auto l = static_cast<std::size_t>(pos - r.lead_hours.begin());
      double lo = 0.0;
      if (lead > 1) {
        if (l == 0 || r.lead_hours[l - 1] != lead - 1) continue;
        if (!r.valid[r.flat(l - 1, i, j)]) continue;
        lo = r.ssrd_cum[r.flat(l - 1, i, j)];
      }
      if (!r.valid[r.flat(l, i, j)]) continue;
      acc += r.ssrd_cum[r.flat(l, i, j)] - lo;
      found = true;
    }
    if (found) {
      out.cum[k] = acc;
      out.valid[k] = 1;
    }
  }
  return out;
}

TimeSeries15 downscale_ssrd(const HourlyCumSeries& hourly, const ClearSkyProfile& cs) {
  if (cs.plane_of_array)
    throw std::invalid_argument("downscale_ssrd: clear-sky profile must be horizontal");
  if (hourly.size() == 0) throw std::invalid_argument("downscale_ssrd: empty hourly series");
  const std::size_t n_slots = 4 * hourly.size();
  if (cs.series.start != hourly.origin() || cs.series.size() != n_slots)
    throw std::invalid_argument(
        "downscale_ssrd: span mismatch between hourly series and clear-sky profile");

  // cumulated clear-sky energy at every 15-min grid point (J/m²)
  std::vector<double> cum15(n_slots + 1, 0.0);
  for (std::size_t s = 0; s < n_slots; ++s)
    cum15[s + 1] = cum15[s] + (cs.series.is_valid(s) ? cs.series.values[s] : 0.0) * 900.0;

  // normalized ratio at hour marks; leading dark marks borrow the first
  // defined ratio so the first sunlit hour keeps the clear-day identity
  const std::size_t m = hourly.size();
  std::vector<double> ratio(m + 1, 0.0);  // ratio[0] at the origin
  std::vector<std::uint8_t> defined(m + 1, 0);
  std::size_t first_defined = m + 1;
  for (std::size_t k = 1; k <= m; ++k) {
    const double s_k = cum15[4 * k];
    if (s_k > 0.0 && hourly.is_valid(k - 1)) {
      ratio[k] = hourly.cum[k - 1] / s_k;
      defined[k] = 1;
      if (first_defined > m) first_defined = k;
    }
  }
  for (std::size_t k = 0; k <= m; ++k) {
    if (defined[k]) break;
    if (first_defined <= m) {
      ratio[k] = ratio[first_defined];
      defined[k] = 1;
    } else {
      ratio[k] = 0.0;  // whole span dark: 0/0 -> 0
      defined[k] = 1;
    }
  }

  // window k covers slots 4(k-1)..4k-1 and interpolates between the ratio
  // anchors at marks k-1 and k; it is emitted only when both anchors exist
  TimeSeries15 out = TimeSeries15::masked(cs.series.start, n_slots, Unit::watt_per_m2);
  for (std::size_t k = 1; k <= m; ++k) {
    if (!defined[k - 1] || !defined[k]) continue;
    const double n_lo = ratio[k - 1];
    const double n_hi = ratio[k];
    for (std::size_t s = 0; s < 4; ++s) {
      const std::size_t slot = 4 * (k - 1) + s;
      if (!cs.series.is_valid(slot)) continue;
      const double a0 = static_cast<double>(s) / 4.0;
      const double a1 = static_cast<double>(s + 1) / 4.0;
      const double r0 = (n_lo + a0 * (n_hi - n_lo)) * cum15[slot];
      const double r1 = (n_lo + a1 * (n_hi - n_lo)) * cum15[slot + 1];
      out.set(slot, std::max(0.0, (r1 - r0) / 900.0));
    }
  }
  return out;
}

}  // namespace pvfc
