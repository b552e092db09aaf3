#include "dropzone/features.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace dropzone {

void FeatureConfig::validate() const {
  if (k_slope < 1) raise(Errc::config_invalid, "k_slope must be >= 1");
  if (k_rough <= k_slope) raise(Errc::config_invalid, "k_rough must exceed k_slope");
  if (min_neighbors < 3) raise(Errc::config_invalid, "min_neighbors must be >= 3");
}

SlopeResult slope_map(const BevGrid& grid, const FeatureConfig& cfg) {
  cfg.validate();
  const GridSpec& spec = grid.spec();
  SlopeResult out{Raster(spec), Raster(spec)};

  for (int row = 0; row < spec.nrows; ++row) {
    for (int col = 0; col < spec.ncols; ++col) {
      if (grid.cell(row, col).count == 0) continue;

      Eigen::Vector3d sum = Eigen::Vector3d::Zero();
      std::vector<Eigen::Vector3d> samples;
      for (int dr = -cfg.k_slope; dr <= cfg.k_slope; ++dr) {
        for (int dc = -cfg.k_slope; dc <= cfg.k_slope; ++dc) {
          int r = row + dr, c = col + dc;
          if (!spec.in_bounds(r, c)) continue;
          const BevCell& cell = grid.cell(r, c);
          if (cell.count == 0) continue;
          auto [x, y] = spec.cell_center(r, c);
          samples.emplace_back(x, y, cell.mean_height);
          sum += samples.back();
        }
      }
      if (samples.size() < static_cast<std::size_t>(cfg.min_neighbors)) continue;

      Eigen::Vector3d mean = sum / static_cast<double>(samples.size());
      Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
      for (const auto& s : samples) {
        Eigen::Vector3d d = s - mean;
        cov += d * d.transpose();
      }
      cov /= static_cast<double>(samples.size());

      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig;
      eig.computeDirect(cov);
      const Eigen::Vector3d& evals = eig.eigenvalues();  // ascending
      // A tie between the two smallest eigenvalues means the normal
      // direction is ambiguous (e.g. all samples collinear); leave no-data.
      // The tolerance sits well above the direct solver's eigenvalue error
      // (~1e-8 relative on degenerate inputs) and well below the gap of any
      // genuine surface window.
      if (evals(1) - evals(0) <= 1e-6 * std::max(evals(2), 1e-300)) continue;

      Eigen::Vector3d normal = eig.eigenvectors().col(0);
      if (normal.z() < 0.0) normal = -normal;
      double nz = std::clamp(normal.z(), 0.0, 1.0);
      out.normal_z.at(row, col) = nz;
      out.slope.at(row, col) = std::acos(nz);
    }
  }
  return out;
}

Raster roughness_map(const BevGrid& grid, const FeatureConfig& cfg) {
  cfg.validate();
  const GridSpec& spec = grid.spec();
  Raster out(spec);

  for (int row = 0; row < spec.nrows; ++row) {
    for (int col = 0; col < spec.ncols; ++col) {
      if (grid.cell(row, col).count == 0) continue;

      double sum = 0.0, sum_sq = 0.0;
      int n = 0;
      for (int dr = -cfg.k_rough; dr <= cfg.k_rough; ++dr) {
        for (int dc = -cfg.k_rough; dc <= cfg.k_rough; ++dc) {
          int r = row + dr, c = col + dc;
          if (!spec.in_bounds(r, c)) continue;
          const BevCell& cell = grid.cell(r, c);
          if (cell.count == 0) continue;
          sum += cell.mean_height;
          sum_sq += cell.mean_height * cell.mean_height;
          ++n;
        }
      }
      if (n < cfg.min_neighbors) continue;
      double mean = sum / n;
      double var = std::max(sum_sq / n - mean * mean, 0.0);
      out.at(row, col) = std::sqrt(var);
    }
  }
  return out;
}

ObstacleSet derive_obstacles(const BevGrid& grid, const Raster& slope,
                             const CompatibilityTable& tau, double s_hard) {
  tau.validate();
  if (!(s_hard > 0.0)) raise(Errc::config_invalid, "s_hard must be positive");
  const GridSpec& spec = grid.spec();
  if (slope.spec() != spec) raise(Errc::invalid_argument, "slope raster spec mismatch");

  ObstacleSet obstacles;
  for (int row = 0; row < spec.nrows; ++row) {
    for (int col = 0; col < spec.ncols; ++col) {
      const BevCell& cell = grid.cell(row, col);
      if (cell.count == 0) continue;
      bool semantic_block = tau.lookup(cell.dominant_class) == 0.0;
      bool geometric_block = slope.has_data(row, col) && slope(row, col) > s_hard;
      if (semantic_block || geometric_block) obstacles.cells.push_back({row, col});
    }
  }
  return obstacles;
}

namespace {

// 1D squared-distance lower envelope (two-pass separable transform). f holds
// squared distances keyed by integer position; infinite entries contribute
// no parabola. The result lands in d.
void envelope_1d(const std::vector<double>& f, std::vector<double>& d) {
  const int n = static_cast<int>(f.size());
  const double inf = std::numeric_limits<double>::infinity();

  int q0 = 0;
  while (q0 < n && f[q0] == inf) ++q0;
  if (q0 == n) {
    std::fill(d.begin(), d.begin() + n, inf);
    return;
  }

  std::vector<int> v(n);       // sites of envelope parabolas
  std::vector<double> z(n + 1);  // envelope breakpoints
  int k = 0;
  v[0] = q0;
  z[0] = -inf;
  z[1] = inf;

  auto intersect = [&f](int q, int p) {
    return ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
           (2.0 * (q - p));
  };

  for (int q = q0 + 1; q < n; ++q) {
    if (f[q] == inf) continue;
    double s = intersect(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }

  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

Raster clearance_map(const GridSpec& spec, const ObstacleSet& obstacles) {
  spec.validate();
  const double inf = std::numeric_limits<double>::infinity();
  Raster out(spec, inf);
  if (obstacles.cells.empty()) return out;  // +inf sentinel everywhere

  // Squared distance in cell units, transformed per row then per column.
  std::vector<double> dist2(static_cast<std::size_t>(spec.nrows) * spec.ncols, inf);
  for (const auto& cell : obstacles.cells) {
    if (!spec.in_bounds(cell.row, cell.col)) raise(Errc::out_of_bounds, "obstacle out of bounds");
    dist2[static_cast<std::size_t>(cell.row) * spec.ncols + cell.col] = 0.0;
  }

  std::vector<double> line, result;
  line.resize(spec.ncols);
  result.resize(spec.ncols);
  for (int row = 0; row < spec.nrows; ++row) {
    for (int col = 0; col < spec.ncols; ++col) {
      line[col] = dist2[static_cast<std::size_t>(row) * spec.ncols + col];
    }
    envelope_1d(line, result);
    for (int col = 0; col < spec.ncols; ++col) {
      dist2[static_cast<std::size_t>(row) * spec.ncols + col] = result[col];
    }
  }

  line.resize(spec.nrows);
  result.resize(spec.nrows);
  for (int col = 0; col < spec.ncols; ++col) {
    for (int row = 0; row < spec.nrows; ++row) {
      line[row] = dist2[static_cast<std::size_t>(row) * spec.ncols + col];
    }
    envelope_1d(line, result);
    for (int row = 0; row < spec.nrows; ++row) {
      dist2[static_cast<std::size_t>(row) * spec.ncols + col] = result[row];
    }
  }

  for (int row = 0; row < spec.nrows; ++row) {
    for (int col = 0; col < spec.ncols; ++col) {
      double d2 = dist2[static_cast<std::size_t>(row) * spec.ncols + col];
      out.at(row, col) = spec.resolution * std::sqrt(d2);
    }
  }
  return out;
}

FeatureMaps compute_features(const BevGrid& grid, const FeatureConfig& cfg,
                             const CompatibilityTable& tau, double s_hard) {
  FeatureMaps maps;
  SlopeResult slope = slope_map(grid, cfg);
  maps.slope = std::move(slope.slope);
  maps.normal_z = std::move(slope.normal_z);
  maps.roughness = roughness_map(grid, cfg);
  ObstacleSet obstacles = derive_obstacles(grid, maps.slope, tau, s_hard);
  maps.clearance = clearance_map(grid.spec(), obstacles);
  return maps;
}

}  // namespace dropzone
