#include "pvfc/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pvfc {

double pearson(const TimeSeries15& x, const TimeSeries15& y, int lag_steps) {
  require_same_grid(x, y, "pearson");
  if (lag_steps < 0) throw std::invalid_argument("pearson: lag_steps must be >= 0");
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t t = static_cast<std::size_t>(lag_steps); t < n; ++t) {
    const std::size_t s = t - static_cast<std::size_t>(lag_steps);
    if (!x.is_valid(t) || !y.is_valid(s)) continue;
    const double a = x.values[t];
    const double b = y.values[s];
    sx += a;
    sy += b;
    sxx += a * a;
    syy += b * b;
    sxy += a * b;
    ++m;
  }
  if (m < kMinPearsonOverlap)
    throw std::runtime_error("pearson: insufficient overlap (" + std::to_string(m) + " pairs, need " +
                             std::to_string(kMinPearsonOverlap) + ")");
  const double md = static_cast<double>(m);
  const double vx = sxx - sx * sx / md;
  const double vy = syy - sy * sy / md;
  if (vx <= 0.0 || vy <= 0.0) throw std::runtime_error("pearson: zero variance");
  return (sxy - sx * sy / md) / std::sqrt(vx * vy);
}

namespace {

void sort_ranking(PixelRanking& r) {
  std::sort(r.entries.begin(), r.entries.end(), [](const PixelRankEntry& a, const PixelRankEntry& b) {
    const double aa = std::fabs(a.pearson_r);
    const double bb = std::fabs(b.pearson_r);
    if (aa != bb) return aa > bb;
    if (a.distance_km != b.distance_km) return a.distance_km < b.distance_km;
    return a.cell < b.cell;
  });
}

}  // namespace

PixelRanking rank_pixels(const SiteMetadata& site, const GridStack& grid,
                         const NormalizedSeries& prod_norm, double radius_km, int lag_steps,
                         double eps_floor) {
  PixelRanking out;
  out.site_id = site.site_id;
  out.lag_steps = lag_steps;
  std::size_t in_radius = 0;
  for (std::size_t i = 0; i < grid.n_lat(); ++i)
    for (std::size_t j = 0; j < grid.n_lon(); ++j) {
      const PixelCell cell{static_cast<int>(i), static_cast<int>(j)};
      const double d = haversine_km(grid.cell_center(cell), site.location);
      if (d > radius_km) continue;
      ++in_radius;
      const TimeSeries15 px = pixel_series(grid, cell);
      const ClearSkyProfile cs = clearsky_profile(grid.cell_center(cell), std::nullopt, grid.grid());
      const NormalizedSeries idx = normalize(px, cs, eps_floor);
      try {
        out.entries.push_back(PixelRankEntry{cell, d, pearson(prod_norm.index, idx.index, lag_steps)});
      } catch (const std::runtime_error&) {
        // unusable cell (not enough overlap or flat): skip, keep ranking
      }
    }
  if (in_radius == 0)
    throw std::runtime_error("rank_pixels: no grid cell within " + std::to_string(radius_km) +
                             " km of site " + site.site_id);
  sort_ranking(out);
  return out;
}

PixelRanking rank_pixels_indexed(const SiteMetadata& site, const GridStack& grid,
                                 const std::vector<TimeSeries15>& cell_index,
                                 const NormalizedSeries& prod_norm, double radius_km,
                                 int lag_steps) {
  if (cell_index.size() != grid.n_cells())
    throw std::invalid_argument("rank_pixels_indexed: cache size does not match grid");
  PixelRanking out;
  out.site_id = site.site_id;
  out.lag_steps = lag_steps;
  std::size_t in_radius = 0;
  for (std::size_t i = 0; i < grid.n_lat(); ++i)
    for (std::size_t j = 0; j < grid.n_lon(); ++j) {
      const PixelCell cell{static_cast<int>(i), static_cast<int>(j)};
      const double d = haversine_km(grid.cell_center(cell), site.location);
      if (d > radius_km) continue;
      ++in_radius;
      try {
        out.entries.push_back(PixelRankEntry{
            cell, d, pearson(prod_norm.index, cell_index[i * grid.n_lon() + j], lag_steps)});
      } catch (const std::runtime_error&) {
      }
    }
  if (in_radius == 0)
    throw std::runtime_error("rank_pixels_indexed: no grid cell within " +
                             std::to_string(radius_km) + " km of site " + site.site_id);
  sort_ranking(out);
  return out;
}

std::vector<PixelCell> top_n(const PixelRanking& ranking, std::size_t n) {
  if (n < 1) throw std::invalid_argument("top_n: n must be >= 1");
  std::vector<PixelCell> out;
  const std::size_t take = std::min(n, ranking.entries.size());
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(ranking.entries[i].cell);
  return out;
}

NeighborSet nearest_neighbors(const SiteMetadata& site, const std::vector<SiteMetadata>& all_sites,
                              std::size_t k) {
  struct Cand {
    double d;
    std::string id;
  };
  std::vector<Cand> cands;
  for (const auto& other : all_sites) {
    if (other.site_id == site.site_id) continue;
    cands.push_back(Cand{haversine_km(site.location, other.location), other.site_id});
  }
  if (cands.size() < k)
    throw std::runtime_error("nearest_neighbors: site " + site.site_id + " has only " +
                             std::to_string(cands.size()) + " candidates, need " +
                             std::to_string(k));
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return std::tie(a.d, a.id) < std::tie(b.d, b.id);
  });
  NeighborSet out;
  out.site_id = site.site_id;
  for (std::size_t i = 0; i < k; ++i) out.neighbors.push_back(cands[i].id);
  return out;
}

void write_ranking_csv(const std::string& path, const PixelRanking& ranking,
                       const GridStack& grid) {
  csv::Writer w(path);
  w.header({"rank", "lat", "lon", "distance_km", "pearson_r"});
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    const auto& e = ranking.entries[i];
    const GeoPoint p = grid.cell_center(e.cell);
    w.field(static_cast<long>(i + 1))
        .field(p.latitude_deg)
        .field(p.longitude_deg)
        .field(e.distance_km)
        .field(e.pearson_r);
    w.end_row();
  }
}

DesignMatrix build_design_matrix(int horizon_steps, int max_lag, const MatrixSources& src,
                                 utc_time begin, utc_time end) {
  if (!src.self) throw std::invalid_argument("build_design_matrix: missing self series");
  if (horizon_steps < 1 || horizon_steps > 24)
    throw std::invalid_argument("build_design_matrix: horizon_steps outside [1, 24]");
  if (max_lag < 0) throw std::invalid_argument("build_design_matrix: max_lag must be >= 0");
  const TimeSeries15& self = *src.self;
  for (const auto& [name, s] : src.neighbors) require_same_grid(self, *s, "neighbor " + name);
  for (const auto& [name, s] : src.pixels) require_same_grid(self, *s, "pixel " + name);
  if (src.nwp) require_same_grid(self, *src.nwp, "nwp");

  DesignMatrix dm;
  dm.horizon_steps = horizon_steps;
  for (int l = 0; l <= max_lag; ++l) dm.columns.push_back("self_lag" + std::to_string(l));
  for (const auto& [name, s] : src.neighbors)
    for (int l = 0; l <= max_lag; ++l) dm.columns.push_back(name + "_lag" + std::to_string(l));
  for (const auto& [name, s] : src.pixels) dm.columns.push_back(name);
  if (src.nwp) dm.columns.push_back("nwp");

  const TimeGrid g = self.grid();
  const std::size_t h = static_cast<std::size_t>(horizon_steps);
  const std::size_t lmax = static_cast<std::size_t>(max_lag);

  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
  std::vector<double> row(dm.columns.size());
  for (std::size_t t = lmax; t + h < g.size; ++t) {
    const utc_time issue = g.at(t);
    if (issue < begin || issue >= end) continue;
    bool ok = self.is_valid(t + h);
    std::size_t c = 0;
    for (std::size_t l = 0; ok && l <= lmax; ++l, ++c) {
      ok = self.is_valid(t - l);
      row[c] = self.values[t - l];
    }
    for (const auto& [name, s] : src.neighbors)
      for (std::size_t l = 0; ok && l <= lmax; ++l, ++c) {
        ok = s->is_valid(t - l);
        row[c] = s->values[t - l];
      }
    for (const auto& [name, s] : src.pixels) {
      if (!ok) break;
      ok = s->is_valid(t);
      row[c++] = s->values[t];
    }
    if (ok && src.nwp) {
      ok = src.nwp->is_valid(t + h);
      row[c++] = src.nwp->values[t + h];
    }
    if (!ok) continue;
    rows.push_back(row);
    targets.push_back(self.values[t + h]);
    dm.row_times.push_back(issue);
  }

  if (rows.size() < kMinTrainingRows)
    throw std::runtime_error("build_design_matrix: insufficient training data (" +
                             std::to_string(rows.size()) + " rows, need " +
                             std::to_string(kMinTrainingRows) + ")");
  dm.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dm.columns.size()));
  dm.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c2 = 0; c2 < dm.columns.size(); ++c2)
      dm.X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c2)) = rows[r][c2];
    dm.y(static_cast<Eigen::Index>(r)) = targets[r];
  }
  return dm;
}

}  // namespace pvfc
