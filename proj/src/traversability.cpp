#include "dropzone/traversability.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dropzone {

void ThresholdConfig::validate() const {
  if (!(s_soft < s_hard)) raise(Errc::config_invalid, "s_soft must be below s_hard");
  if (!(sigma_soft < sigma_hard)) {
    raise(Errc::config_invalid, "sigma_soft must be below sigma_hard");
  }
  if (!(d_hard < d_soft)) raise(Errc::config_invalid, "d_hard must be below d_soft");
  if (w_slope < 0.0 || w_rough < 0.0 || w_clear < 0.0) {
    raise(Errc::config_invalid, "component weights must be non-negative");
  }
  if (std::abs(w_slope + w_rough + w_clear - 1.0) > 1e-9) {
    raise(Errc::config_invalid, "component weights must sum to 1");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) raise(Errc::config_invalid, "alpha must lie in [0, 1]");
}

namespace {

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

Raster penalty(const Raster& feature, double hard, double soft, bool inverted) {
  Raster out(feature.spec());
  for (int row = 0; row < feature.nrows(); ++row) {
    for (int col = 0; col < feature.ncols(); ++col) {
      if (!feature.has_data(row, col)) continue;
      double v = feature(row, col);
      double score = inverted ? (v - hard) / (soft - hard)   // clearance: more is better
                              : (hard - v) / (hard - soft);  // slope/roughness: less is better
      out.at(row, col) = clip01(score);
    }
  }
  return out;
}

}  // namespace

PenaltyRasters penalty_scores(const FeatureMaps& features, const ThresholdConfig& cfg) {
  cfg.validate();
  PenaltyRasters out;
  out.slope = penalty(features.slope, cfg.s_hard, cfg.s_soft, false);
  out.roughness = penalty(features.roughness, cfg.sigma_hard, cfg.sigma_soft, false);
  out.clearance = penalty(features.clearance, cfg.d_hard, cfg.d_soft, true);
  return out;
}

Raster geo_score(const PenaltyRasters& penalties, const ThresholdConfig& cfg) {
  cfg.validate();
  const GridSpec& spec = penalties.slope.spec();
  if (penalties.roughness.spec() != spec || penalties.clearance.spec() != spec) {
    raise(Errc::invalid_argument, "penalty rasters are not co-registered");
  }
  Raster out(spec);
  for (int row = 0; row < spec.nrows; ++row) {
    for (int col = 0; col < spec.ncols; ++col) {
      if (!penalties.slope.has_data(row, col) || !penalties.roughness.has_data(row, col) ||
          !penalties.clearance.has_data(row, col)) {
        continue;
      }
      out.at(row, col) = cfg.w_slope * penalties.slope(row, col) +
                         cfg.w_rough * penalties.roughness(row, col) +
                         cfg.w_clear * penalties.clearance(row, col);
    }
  }
  return out;
}

Raster sem_score(const BevGrid& grid, const CompatibilityTable& tau) {
  tau.validate();
  const GridSpec& spec = grid.spec();
  Raster out(spec);
  for (int row = 0; row < spec.nrows; ++row) {
    for (int col = 0; col < spec.ncols; ++col) {
      const BevCell& cell = grid.cell(row, col);
      if (cell.count == 0) continue;
      out.at(row, col) = tau.lookup(cell.dominant_class);
    }
  }
  return out;
}

TraversabilityMap fuse(const Raster& t_geo, const Raster& t_sem, const Raster& p_conf,
                       const ThresholdConfig& cfg) {
  cfg.validate();
  const GridSpec& spec = t_geo.spec();
  if (t_sem.spec() != spec || p_conf.spec() != spec) {
    raise(Errc::invalid_argument, "fusion rasters are not co-registered");
  }
  TraversabilityMap map{spec, Raster(spec), t_geo, t_sem};
  for (int row = 0; row < spec.nrows; ++row) {
    for (int col = 0; col < spec.ncols; ++col) {
      if (!t_geo.has_data(row, col) || !t_sem.has_data(row, col) ||
          !p_conf.has_data(row, col)) {
        continue;
      }
      double fusedv =
          (cfg.alpha * t_geo(row, col) + (1.0 - cfg.alpha) * t_sem(row, col)) * p_conf(row, col);
      map.t.at(row, col) = clip01(fusedv);
    }
  }
  return map;
}

TravEvalReport evaluate(const Raster& pred, const Raster& gt) {
  if (pred.spec() != gt.spec()) raise(Errc::invalid_argument, "rasters are not co-registered");

  std::vector<std::pair<double, int>> samples;  // (score, label)
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  double sq_sum = 0.0;
  for (int row = 0; row < pred.nrows(); ++row) {
    for (int col = 0; col < pred.ncols(); ++col) {
      if (!pred.has_data(row, col) || !gt.has_data(row, col)) continue;
      double g = gt(row, col);
      if (g != 0.0 && g != 1.0) {
        raise(Errc::invalid_argument, "ground truth must be binary (0/1)");
      }
      double score = pred(row, col);
      int label = static_cast<int>(g);
      samples.emplace_back(score, label);
      bool predicted = score >= 0.5;
      if (label == 1) {
        predicted ? ++tp : ++fn;
      } else {
        predicted ? ++fp : ++tn;
      }
      double err = score - g;
      sq_sum += err * err;
    }
  }
  if (samples.empty()) raise(Errc::invalid_argument, "no jointly valid cells to evaluate");

  TravEvalReport report;
  report.n_cells = samples.size();
  report.aacc = static_cast<double>(tp + tn) / static_cast<double>(samples.size());
  report.mse = sq_sum / static_cast<double>(samples.size());

  const std::size_t n_pos = tp + fn;
  const std::size_t n_neg = tn + fp;
  double recall_sum = 0.0;
  int n_classes = 0;
  if (n_pos > 0) {
    recall_sum += static_cast<double>(tp) / static_cast<double>(n_pos);
    ++n_classes;
  }
  if (n_neg > 0) {
    recall_sum += static_cast<double>(tn) / static_cast<double>(n_neg);
    ++n_classes;
  }
  report.macc = recall_sum / n_classes;

  if (n_pos > 0 && n_neg > 0) {
    // Mann-Whitney rank statistic with mid-ranks for ties.
    std::sort(samples.begin(), samples.end());
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < samples.size()) {
      std::size_t j = i;
      while (j < samples.size() && samples[j].first == samples[i].first) ++j;
      double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
      for (std::size_t k = i; k < j; ++k) {
        if (samples[k].second == 1) pos_rank_sum += mid_rank;
      }
      i = j;
    }
    double auc = (pos_rank_sum - 0.5 * static_cast<double>(n_pos) * (n_pos + 1)) /
                 (static_cast<double>(n_pos) * static_cast<double>(n_neg));
    report.roc_auc = auc;
  }
  return report;
}

}  // namespace dropzone
