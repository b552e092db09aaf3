#include <doctest.h>

#include <cmath>

#include "dropzone/features.hpp"
#include "dropzone/rng.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace dropzone;

namespace {

constexpr double kDeg = M_PI / 180.0;

/// Cloud with one exact sample of z = f(x, y) at every cell center, so the
/// BEV means carry no sampling error and the kernels see clean inputs.
template <typename F>
BevGrid surface_grid(int n, double res, F&& height, int class_id = classes::kGrass) {
  LabeledPointCloud cloud;
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      double x = (col + 0.5) * res;
      double y = (row + 0.5) * res;
      cloud.push_back({{x, y, height(x, y)}, class_id, 0.9});
    }
  }
  return build_bev(cloud, GridSpec{0, 0, res, n, n});
}

CompatibilityTable neutral_tau() {
  CompatibilityTable tau;
  tau.default_value = 1.0;
  return tau;
}

}  // namespace

TEST_CASE("slope of a flat region is zero") {
  BevGrid grid = surface_grid(16, 0.25, [](double, double) { return 1.5; });
  FeatureConfig cfg;
  SlopeResult res = slope_map(grid, cfg);
  for (int r = 4; r < 12; ++r) {
    for (int c = 4; c < 12; ++c) {
      REQUIRE(res.slope.has_data(r, c));
      CHECK(res.slope(r, c) < 1e-9);
      CHECK(res.normal_z(r, c) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("slope of a 20 degree incline") {
  double tan20 = std::tan(20.0 * kDeg);
  BevGrid grid = surface_grid(32, 0.25, [&](double x, double) { return x * tan20; });
  FeatureConfig cfg;
  SlopeResult res = slope_map(grid, cfg);
  for (int r = 6; r < 26; ++r) {
    for (int c = 6; c < 26; ++c) {
      REQUIRE(res.slope.has_data(r, c));
      CHECK(std::abs(res.slope(r, c) - 20.0 * kDeg) < 0.5 * kDeg);
    }
  }
}

TEST_CASE("slope is invariant to height offset and z-rotation") {
  double tan20 = std::tan(20.0 * kDeg);
  FeatureConfig cfg;

  BevGrid base = surface_grid(24, 0.25, [&](double x, double) { return x * tan20; });
  BevGrid lifted = surface_grid(24, 0.25, [&](double x, double) { return x * tan20 + 37.0; });
  SlopeResult a = slope_map(base, cfg);
  SlopeResult b = slope_map(lifted, cfg);
  for (int r = 5; r < 19; ++r) {
    for (int c = 5; c < 19; ++c) {
      CHECK(std::abs(a.slope(r, c) - b.slope(r, c)) < 1e-9);
    }
  }

  // Plane tilted along a rotated axis still reads 20 degrees.
  double c30 = std::cos(30.0 * kDeg), s30 = std::sin(30.0 * kDeg);
  BevGrid rotated =
      surface_grid(24, 0.25, [&](double x, double y) { return (c30 * x + s30 * y) * tan20; });
  SlopeResult rres = slope_map(rotated, cfg);
  for (int r = 5; r < 19; ++r) {
    for (int c = 5; c < 19; ++c) {
      CHECK(std::abs(rres.slope(r, c) - 20.0 * kDeg) < 0.5 * kDeg);
    }
  }
}

TEST_CASE("slope needs min_neighbors and a usable normal") {
  // Two occupied cells in a row: below min_neighbors of 3.
  LabeledPointCloud sparse;
  sparse.push_back({{0.1, 0.1, 0.0}, 1, 0.9});
  sparse.push_back({{1.1, 0.1, 0.0}, 1, 0.9});
  BevGrid grid = build_bev(sparse, GridSpec{0, 0, 1.0, 8, 8});
  FeatureConfig cfg;
  SlopeResult res = slope_map(grid, cfg);
  CHECK_FALSE(res.slope.has_data(0, 0));
  CHECK_FALSE(res.slope.has_data(0, 1));

  // A single occupied line has an ambiguous normal: stays no-data rather
  // than silently reading flat.
  LabeledPointCloud line;
  for (int i = 0; i < 8; ++i) line.push_back({{i + 0.5, 0.5, 0.0}, 1, 0.9});
  BevGrid lg = build_bev(line, GridSpec{0, 0, 1.0, 8, 8});
  SlopeResult lres = slope_map(lg, cfg);
  for (int c = 0; c < 8; ++c) CHECK_FALSE(lres.slope.has_data(0, c));
}

TEST_CASE("roughness hand values") {
  FeatureConfig cfg;

  BevGrid flat = surface_grid(16, 0.25, [](double, double) { return 2.0; });
  Raster r = roughness_map(flat, cfg);
  for (int row = 4; row < 12; ++row) {
    for (int col = 4; col < 12; ++col) {
      CHECK(r(row, col) < 1e-9);
    }
  }

  // Two-level split: within a window straddling the boundary the population
  // std of {0, 2} halves is 1 at the midline.
  BevGrid split = surface_grid(22, 0.25, [](double x, double) { return x < 2.75 ? 0.0 : 2.0; });
  Raster rs = roughness_map(split, cfg);
  // Row center at the split; window half-width 5 cells straddles evenly when
  // centered on the boundary cell.
  CHECK(rs(11, 10) == doctest::Approx(1.0).epsilon(0.1));

  // Checkerboard of 0/1 tends to population std 0.5.
  BevGrid checker = surface_grid(24, 0.25, [](double x, double y) {
    int cx = static_cast<int>(std::floor(x / 0.25));
    int cy = static_cast<int>(std::floor(y / 0.25));
    return ((cx + cy) % 2 == 0) ? 0.0 : 1.0;
  });
  Raster rc = roughness_map(checker, cfg);
  CHECK(rc(12, 12) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("roughness scaling behavior") {
  FeatureConfig cfg;
  SplitMix64 rng(72);
  std::vector<double> heights(24 * 24);
  for (auto& h : heights) h = rng.gaussian();
  auto field = [&](double x, double y) {
    int cx = std::min(23, static_cast<int>(std::floor(x / 0.25)));
    int cy = std::min(23, static_cast<int>(std::floor(y / 0.25)));
    return heights[cy * 24 + cx];
  };
  BevGrid a = surface_grid(24, 0.25, field);
  BevGrid b = surface_grid(24, 0.25, [&](double x, double y) { return 3.0 * field(x, y) + 11.0; });
  Raster ra = roughness_map(a, cfg);
  Raster rb = roughness_map(b, cfg);
  for (int r = 6; r < 18; ++r) {
    for (int c = 6; c < 18; ++c) {
      CHECK(rb(r, c) == doctest::Approx(3.0 * ra(r, c)).epsilon(1e-6));
    }
  }
}

TEST_CASE("derive_obstacles from semantics and slope") {
  FeatureConfig fcfg;
  double s_hard = 30.0 * kDeg;

  BevGrid flat = surface_grid(12, 0.25, [](double, double) { return 0.0; });
  CompatibilityTable grass_ok;
  grass_ok.tau[classes::kGrass] = 1.0;
  SlopeResult fres = slope_map(flat, fcfg);
  CHECK(derive_obstacles(flat, fres.slope, grass_ok, s_hard).cells.empty());

  // One rock-labeled cell becomes exactly one obstacle.
  LabeledPointCloud cloud;
  for (int row = 0; row < 12; ++row) {
    for (int col = 0; col < 12; ++col) {
      int cls = (row == 5 && col == 7) ? classes::kRock : classes::kGrass;
      cloud.push_back({{(col + 0.5) * 0.25, (row + 0.5) * 0.25, 0.0}, cls, 0.9});
    }
  }
  BevGrid grid = build_bev(cloud, GridSpec{0, 0, 0.25, 12, 12});
  CompatibilityTable tau;
  tau.tau[classes::kGrass] = 1.0;
  tau.tau[classes::kRock] = 0.0;
  SlopeResult sres = slope_map(grid, fcfg);
  ObstacleSet obs = derive_obstacles(grid, sres.slope, tau, s_hard);
  REQUIRE(obs.cells.size() == 1);
  CHECK(obs.cells[0] == CellIndex{5, 7});

  // A tall step produces steep cells that land in the set geometrically.
  BevGrid step = surface_grid(24, 0.25, [](double x, double) { return x < 3.0 ? 0.0 : 2.0; });
  SlopeResult stres = slope_map(step, fcfg);
  ObstacleSet geo = derive_obstacles(step, stres.slope, neutral_tau(), s_hard);
  CHECK(geo.cells.size() > 0);
  bool has_wall_cell = false;
  for (const auto& cell : geo.cells) {
    if (cell.col == 12) has_wall_cell = true;
    CHECK(stres.slope(cell.row, cell.col) > s_hard);
  }
  CHECK(has_wall_cell);
}

TEST_CASE("clearance examples") {
  GridSpec spec{0, 0, 1.0, 8, 8};

  Raster empty = clearance_map(spec, ObstacleSet{});
  CHECK(std::isinf(empty(3, 3)));

  ObstacleSet one;
  one.cells.push_back({0, 0});
  Raster r = clearance_map(spec, one);
  CHECK(r(0, 0) == 0.0);
  CHECK(r(3, 4) == doctest::Approx(5.0));  // 3-4-5 triangle
  CHECK(r(0, 4) == doctest::Approx(4.0));
}

TEST_CASE("clearance equals brute force on random grids") {
  SplitMix64 rng(73);
  for (int trial = 0; trial < 5; ++trial) {
    GridSpec spec{0, 0, 0.5, 64, 64};
    ObstacleSet obs;
    std::vector<std::pair<int, int>> cells;
    for (int r = 0; r < 64; ++r) {
      for (int c = 0; c < 64; ++c) {
        if (rng.next_double() < 0.05) {
          obs.cells.push_back({r, c});
          cells.emplace_back(r, c);
        }
      }
    }
    if (cells.empty()) continue;
    Raster mine = clearance_map(spec, obs);
    auto ref = oracles::brute_force_clearance_sq(64, 64, cells);
    for (int r = 0; r < 64; ++r) {
      for (int c = 0; c < 64; ++c) {
        double expected = 0.5 * std::sqrt(static_cast<double>(ref[r * 64 + c]));
        CHECK(mine(r, c) == expected);
      }
    }
  }
}

TEST_CASE("clearance is 1-Lipschitz across neighbors") {
  SplitMix64 rng(74);
  GridSpec spec{0, 0, 0.25, 32, 32};
  ObstacleSet obs;
  for (int i = 0; i < 20; ++i) {
    obs.cells.push_back({static_cast<int>(rng.next_below(32)),
                         static_cast<int>(rng.next_below(32))});
  }
  Raster r = clearance_map(spec, obs);
  double limit = spec.resolution * std::sqrt(2.0) + 1e-12;
  for (int row = 0; row + 1 < 32; ++row) {
    for (int col = 0; col + 1 < 32; ++col) {
      CHECK(std::abs(r(row, col) - r(row + 1, col)) <= limit);
      CHECK(std::abs(r(row, col) - r(row, col + 1)) <= limit);
      CHECK(std::abs(r(row, col) - r(row + 1, col + 1)) <= limit);
    }
  }
}

TEST_CASE("feature config validation") {
  FeatureConfig bad;
  bad.k_rough = bad.k_slope;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = FeatureConfig{};
  bad.min_neighbors = 2;
  CHECK_THROWS_AS(bad.validate(), Error);
}
