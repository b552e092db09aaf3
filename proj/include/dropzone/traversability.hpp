#pragma once

#include <optional>

#include "dropzone/bev.hpp"
#include "dropzone/compatibility.hpp"
#include "dropzone/features.hpp"
#include "dropzone/raster.hpp"

namespace dropzone {

/// Soft/hard feature thresholds, component weights, and the fusion balance.
/// Angles are radians. Defaults are documented toolkit choices, overridable
/// through the config file.
struct ThresholdConfig {
  double s_soft = 10.0 * M_PI / 180.0;
  double s_hard = 30.0 * M_PI / 180.0;
  double sigma_soft = 0.02;
  double sigma_hard = 0.10;
  double d_soft = 1.0;
  double d_hard = 0.2;
  double w_slope = 0.4;
  double w_rough = 0.3;
  double w_clear = 0.3;
  double alpha = 0.6;

  void validate() const;
};

struct PenaltyRasters {
  Raster slope;      // T_slope
  Raster roughness;  // T_rough
  Raster clearance;  // T_clear
};

/// Normalized linear penalties, clipped to [0, 1]:
///   T_slope = (s_hard - s) / (s_hard - s_soft)
///   T_rough = (sigma_hard - sigma) / (sigma_hard - sigma_soft)
///   T_clear = (d_clear - d_hard) / (d_soft - d_hard)
/// No-data propagates per component.
PenaltyRasters penalty_scores(const FeatureMaps& features, const ThresholdConfig& cfg);

/// Weighted geometric score w_s T_slope + w_r T_rough + w_c T_clear; a cell
/// missing any component stays no-data.
Raster geo_score(const PenaltyRasters& penalties, const ThresholdConfig& cfg);

/// Compatibility of the dominant class per cell; empty cells stay no-data.
Raster sem_score(const BevGrid& grid, const CompatibilityTable& tau);

struct TraversabilityMap {
  GridSpec spec;
  Raster t;      // fused score in [0, 1]
  Raster t_geo;  // retained for inspection
  Raster t_sem;
};

/// T = (alpha * T_geo + (1 - alpha) * T_sem) * p_conf, clipped to [0, 1].
/// No-data in any input makes the cell no-data.
TraversabilityMap fuse(const Raster& t_geo, const Raster& t_sem, const Raster& p_conf,
                       const ThresholdConfig& cfg);

struct TravEvalReport {
  double macc = 0.0;  // mean of per-class recalls
  double aacc = 0.0;  // overall accuracy
  std::optional<double> roc_auc;  // empty when gt has a single class
  double mse = 0.0;
  std::size_t n_cells = 0;
};

/// Compares a continuous prediction against a binary ground-truth raster
/// (values 0/1; anything else is rejected). Predictions threshold at 0.5.
/// ROC AUC uses the rank statistic with the half-tie convention. Cells
/// lacking data on either side are excluded throughout.
TravEvalReport evaluate(const Raster& pred, const Raster& gt);

}  // namespace dropzone
