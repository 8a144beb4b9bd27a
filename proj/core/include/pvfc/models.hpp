#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pvfc/regression.hpp"

namespace pvfc {

enum class Variant { ar, arst, arx, arxst };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

/// Which regressors a model uses and how it is fitted. AR/ARST are purely
/// endogenous; ARX/ARXST add satellite pixels and/or an NWP series; the ST
/// variants add lagged neighbor-site production.
struct ModelSpec {
  Variant variant = Variant::ar;
  int lags = 4;        // Ls, lags 0..Ls
  int neighbor_k = 4;  // ST variants only
  bool use_satellite = false;
  int n_pixels = 100;
  bool use_nwp = false;
  std::string nwp_model_tag;
  std::vector<int> horizons;  // defaults to 1..24 when empty
  bool fit_ols = true;        // satellite models always go through select_lambda
  LassoConfig lasso;
  int ranking_lag = 0;
  bool ranking_lag_per_horizon = false;  // rank at lag = horizon instead
  double radius_km = kOperatingRadiusKm;

  bool spatio_temporal() const { return variant == Variant::arst || variant == Variant::arxst; }
  bool exogenous() const { return variant == Variant::arx || variant == Variant::arxst; }
  std::vector<int> effective_horizons() const;
  void validate() const;
};

/// Everything fit/predict/evaluate read: aligned index series for sites,
/// satellite pixels and NWP, plus the clear-sky profiles used to go back to
/// physical units. Immutable after construction; safe to share across
/// threads.
struct DataBundle {
  TimeGrid span;
  std::vector<SiteMetadata> sites;
  std::map<std::string, TimeSeries15> production_wm2;
  std::map<std::string, NormalizedSeries> production_index;
  std::map<std::string, ClearSkyProfile> cs_poa;
  std::map<std::string, ClearSkyProfile> cs_horizontal;
  std::optional<GridStack> satellite;
  std::vector<TimeSeries15> pixel_index;  // per grid cell, row-major
  std::map<std::string, TimeSeries15> nwp_index;
  std::string nwp_model_tag;
  double eps_floor = kDefaultEpsFloorWm2;
  double diffuse_fraction = kDefaultDiffuseFraction;

  const SiteMetadata& site(const std::string& id) const;
  const TimeSeries15& pixel_index_at(const PixelCell& cell) const;
};

struct BundleOptions {
  double eps_floor = kDefaultEpsFloorWm2;
  double diffuse_fraction = kDefaultDiffuseFraction;
};

/// Runs the ingestion chain (resample, quality check, unit conversion,
/// normalization, NWP downscaling, pixel indexing) over one common span.
DataBundle build_bundle(const std::vector<SiteMetadata>& sites,
                        const std::map<std::string, RawSeries>& production_native,
                        std::optional<GridStack> satellite, const std::vector<NwpRun>& nwp_runs,
                        const std::string& nwp_model_tag, const TimeGrid& span,
                        const BundleOptions& opts = {});

struct HorizonModel {
  Coefficients coefficients;
  std::vector<PixelRankEntry> pixels;  // ranking snapshot, top-N order
  double lambda = 0.0;                 // 0 for OLS fits
};

struct FittedModel {
  std::string label;
  ModelSpec spec;
  std::string site_id;
  utc_time train_begin{}, train_end{};
  std::vector<std::string> neighbor_ids;
  std::map<int, HorizonModel> per_horizon;
  std::vector<std::string> warnings;  // per-horizon skips and fit notes
};

/// Fits one model per horizon. Horizons without enough usable rows are
/// skipped with a warning; throws only when every horizon fails.
FittedModel fit_model(const std::string& label, const ModelSpec& spec, const std::string& site_id,
                      const DataBundle& bundle, utc_time train_begin, utc_time train_end);

struct Forecast {
  std::string site_id;
  utc_time issue{};
  int horizon_steps = 0;
  double value_wm2 = 0.0;    // max(0, value_index * clear-sky at t+h)
  double value_index = 0.0;  // pre-denormalization prediction
};

/// Single forecast; throws naming the exact missing column/timestamp when a
/// regressor is masked and on unfitted horizons.
Forecast predict(const FittedModel& model, utc_time issue, int horizon_steps,
                 const DataBundle& bundle);

enum class MissingPolicy { skip, error };

struct ForecastSeries {
  int horizon_steps = 0;
  TimeSeries15 value_wm2;    // indexed by target time t+h
  TimeSeries15 value_index;  // same grid, pre-denormalization
};

/// One forecast per issue time in [begin, end - h). With MissingPolicy::skip
/// the affected target is masked; with ::error the first missing regressor
/// aborts, naming it.
ForecastSeries predict_batch(const FittedModel& model, utc_time begin, utc_time end,
                             int horizon_steps, const DataBundle& bundle, MissingPolicy policy);

/// Persists to a directory: manifest.txt plus per-horizon coefficient and
/// pixel CSVs. Reloading reproduces bit-identical predictions.
void save_model(const FittedModel& model, const std::string& dir);
FittedModel load_model(const std::string& dir);

/// Thread count for per-horizon parallel fitting: PVFC_THREADS when set,
/// otherwise hardware concurrency (capped at 8).
unsigned worker_threads();

}  // namespace pvfc
