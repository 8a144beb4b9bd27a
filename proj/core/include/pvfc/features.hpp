#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "pvfc/ingestion.hpp"
#include "pvfc/stationarize.hpp"

namespace pvfc {

inline constexpr int kMinPearsonOverlap = 30;
inline constexpr double kOperatingRadiusKm = 50.0;  // per-site useful area
inline constexpr double kScanRadiusKm = 150.0;      // exploratory scan

struct PixelRankEntry {
  PixelCell cell;
  double distance_km = 0.0;
  double pearson_r = 0.0;
};

/// Cells ordered by descending |pearson_r|; ties by ascending distance,
/// then (lat_idx, lon_idx).
struct PixelRanking {
  std::string site_id;
  int lag_steps = 0;
  std::vector<PixelRankEntry> entries;
};

/// Other sites ordered by ascending distance from the owner, self excluded.
struct NeighborSet {
  std::string site_id;
  std::vector<std::string> neighbors;
};

/// Aligned (X, y) for one site and one horizon. Row i pairs the regressors
/// observed at row_times[i] with the target index at row_times[i] + horizon.
struct DesignMatrix {
  int horizon_steps = 0;
  std::vector<std::string> columns;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<utc_time> row_times;
};

/// Pearson correlation of (x_t, y_{t-lag}) over jointly unmasked pairs.
/// Throws on fewer than kMinPearsonOverlap pairs or zero variance.
double pearson(const TimeSeries15& x, const TimeSeries15& y, int lag_steps);

/// Scores every cell within radius_km of the site against the production
/// index at the given lag; cells that cannot be scored (too little overlap,
/// flat series) are skipped. The pixel series are normalized by their own
/// local horizontal clear sky. Throws when no cell lies within the radius.
PixelRanking rank_pixels(const SiteMetadata& site, const GridStack& grid,
                         const NormalizedSeries& prod_norm, double radius_km, int lag_steps,
                         double eps_floor = kDefaultEpsFloorWm2);

/// Same ranking, but against precomputed per-cell index series (cache path).
PixelRanking rank_pixels_indexed(const SiteMetadata& site, const GridStack& grid,
                                 const std::vector<TimeSeries15>& cell_index,
                                 const NormalizedSeries& prod_norm, double radius_km,
                                 int lag_steps);

std::vector<PixelCell> top_n(const PixelRanking& ranking, std::size_t n);

NeighborSet nearest_neighbors(const SiteMetadata& site, const std::vector<SiteMetadata>& all_sites,
                              std::size_t k);

/// `rank,lat,lon,distance_km,pearson_r`
void write_ranking_csv(const std::string& path, const PixelRanking& ranking,
                       const GridStack& grid);

/// Named index series feeding one design matrix. All series must share the
/// 15-min grid of `self`.
struct MatrixSources {
  const TimeSeries15* self = nullptr;  // own production index
  std::vector<std::pair<std::string, const TimeSeries15*>> neighbors;
  std::vector<std::pair<std::string, const TimeSeries15*>> pixels;
  const TimeSeries15* nwp = nullptr;

  std::size_t column_count(int max_lag) const {
    return (1 + neighbors.size()) * static_cast<std::size_t>(max_lag + 1) + pixels.size() +
           (nwp ? 1 : 0);
  }
};

inline constexpr std::size_t kMinTrainingRows = 50;

/// Column order: self lags 0..Ls, then per-neighbor lags 0..Ls, then pixels
/// at lag 0, then NWP at t+h. Rows are issue times t inside [begin, end)
/// whose every constituent (lags, pixels, NWP at t+h, target at t+h) is
/// unmasked. Throws when fewer than kMinTrainingRows rows survive.
DesignMatrix build_design_matrix(int horizon_steps, int max_lag, const MatrixSources& src,
                                 utc_time begin, utc_time end);

}  // namespace pvfc
