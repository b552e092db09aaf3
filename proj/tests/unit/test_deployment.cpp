#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dropzone/deployment.hpp"
#include "dropzone/rng.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace dropzone;

namespace {

/// Exhaustive reference for select_top_k's greedy contract.
std::vector<DeploymentCandidate> greedy_oracle(std::vector<DeploymentCandidate> cands,
                                               const DeploymentConfig& cfg) {
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    if (a.objective != b.objective) return a.objective > b.objective;
    if (a.goal_distance != b.goal_distance) return a.goal_distance < b.goal_distance;
    return std::make_pair(a.row, a.col) < std::make_pair(b.row, b.col);
  });
  std::vector<DeploymentCandidate> out;
  for (const auto& c : cands) {
    if (out.size() == static_cast<std::size_t>(cfg.k)) break;
    bool ok = true;
    for (const auto& s : out) {
      if (std::hypot(c.x - s.x, c.y - s.y) < cfg.min_separation) ok = false;
    }
    if (ok) out.push_back(c);
  }
  return out;
}

Raster random_map(SplitMix64& rng, int n, double nodata_frac = 0.1) {
  Raster r(GridSpec{0, 0, 1.0, n, n});
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      if (rng.next_double() < nodata_frac) continue;
      r.at(row, col) = rng.next_double();
    }
  }
  return r;
}

}  // namespace

TEST_CASE("candidates filtering and objective") {
  GridSpec spec{0, 0, 1.0, 10, 10};
  Raster uniform(spec, 1.0);
  DeploymentConfig cfg;
  cfg.t_th = 0.5;
  cfg.r_max = 100.0;

  auto all = candidates(uniform, 5.0, 5.0, cfg);
  CHECK(all.size() == 100);

  cfg.t_th = 1.0;
  Raster low(spec, 0.9);
  CHECK(candidates(low, 5.0, 5.0, cfg).empty());

  // lambda = 0.5, T = 0.8, d = 10, r_max = 20 -> 0.65.
  DeploymentConfig obj_cfg;
  obj_cfg.lambda = 0.5;
  obj_cfg.r_max = 20.0;
  obj_cfg.t_th = 0.0;
  GridSpec wide{0, 0, 1.0, 21, 1};
  Raster strip(wide, 0.8);
  auto cands = candidates(strip, 0.5, 0.5, obj_cfg);
  bool found = false;
  for (const auto& c : cands) {
    if (c.col == 10) {  // center at x = 10.5, distance 10 from the goal
      CHECK(c.goal_distance == doctest::Approx(10.0));
      CHECK(c.objective == doctest::Approx(0.65));
      found = true;
    }
  }
  CHECK(found);

  CHECK_THROWS_AS(candidates(uniform, 50.0, 5.0, DeploymentConfig{}), Error);
}

TEST_CASE("select_top_k separation and ranking") {
  DeploymentConfig cfg;
  cfg.k = 2;
  cfg.min_separation = 1.0;

  DeploymentCandidate a{0, 0, 0.0, 0.0, 0.9, 1.0, 0.9, true};
  DeploymentCandidate b{0, 1, 0.1, 0.0, 0.8, 1.0, 0.8, true};  // 0.1 m away
  auto picked = select_top_k({a, b}, cfg);
  REQUIRE(picked.size() == 1);
  CHECK(picked[0].objective == 0.9);

  cfg.k = 1;
  DeploymentCandidate c{3, 3, 5.0, 5.0, 0.95, 2.0, 0.95, true};
  auto top1 = select_top_k({a, b, c}, cfg);
  REQUIRE(top1.size() == 1);
  CHECK(top1[0].row == 3);
}

TEST_CASE("select_top_k matches the exhaustive oracle") {
  SplitMix64 rng(91);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<DeploymentCandidate> cands;
    for (int i = 0; i < 100; ++i) {
      DeploymentCandidate c;
      c.row = static_cast<int>(rng.next_below(20));
      c.col = static_cast<int>(rng.next_below(20));
      c.x = c.col + 0.5;
      c.y = c.row + 0.5;
      c.score_t = rng.next_double();
      c.goal_distance = rng.uniform(0, 10);
      // Coarse objectives force tie-break paths.
      c.objective = std::floor(rng.next_double() * 16.0) / 16.0;
      c.reachable = true;
      cands.push_back(c);
    }
    DeploymentConfig cfg;
    cfg.k = 5;
    cfg.min_separation = 2.0;
    auto mine = select_top_k(cands, cfg);
    auto ref = greedy_oracle(cands, cfg);
    REQUIRE(mine.size() == ref.size());
    for (std::size_t i = 0; i < mine.size(); ++i) {
      CHECK(mine[i].row == ref[i].row);
      CHECK(mine[i].col == ref[i].col);
      CHECK(mine[i].objective == ref[i].objective);
    }
  }
}

TEST_CASE("reachable basics") {
  GridSpec spec{0, 0, 1.0, 8, 8};
  Raster map(spec, 1.0);

  CHECK(reachable(map, {0, 0}, {7, 7}, 0.5));
  CHECK(reachable(map, {3, 3}, {3, 3}, 0.5));

  // A full-width wall of zeros separates the halves.
  for (int col = 0; col < 8; ++col) map.at(4, col) = 0.0;
  CHECK_FALSE(reachable(map, {0, 0}, {7, 7}, 0.5));
  CHECK(reachable(map, {0, 0}, {3, 7}, 0.5));

  // A failing endpoint is unreachable even from itself.
  CHECK_FALSE(reachable(map, {4, 4}, {4, 4}, 0.5));
  CHECK_THROWS_AS(reachable(map, {-1, 0}, {0, 0}, 0.5), Error);
}

TEST_CASE("reachable agrees with the union-find oracle") {
  SplitMix64 rng(92);
  for (int trial = 0; trial < 5; ++trial) {
    Raster map = random_map(rng, 32, 0.15);
    for (int q = 0; q < 40; ++q) {
      int r0 = static_cast<int>(rng.next_below(32));
      int c0 = static_cast<int>(rng.next_below(32));
      int r1 = static_cast<int>(rng.next_below(32));
      int c1 = static_cast<int>(rng.next_below(32));
      CHECK(reachable(map, {r0, c0}, {r1, c1}, 0.5) ==
            oracles::union_find_reachable(map, r0, c0, r1, c1, 0.5));
    }
  }
}

TEST_CASE("select_deployment respects reachability") {
  GridSpec spec{0, 0, 1.0, 12, 12};
  DeploymentConfig cfg;
  cfg.t_th = 0.5;
  cfg.r_max = 20.0;
  cfg.k = 3;
  cfg.min_separation = 1.0;

  // Sealed basin: the goal sits inside a dead pool of zeros. Far cells pass
  // the threshold but cannot reach it.
  Raster basin(spec, 0.9);
  for (int r = 3; r <= 7; ++r) {
    for (int c = 3; c <= 7; ++c) basin.at(r, c) = 0.0;
  }
  CHECK_THROWS_AS(select_deployment(basin, 5.5, 5.5, cfg), Error);
  try {
    select_deployment(basin, 5.5, 5.5, cfg);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_candidates);
  }

  // Outside the basin selection works, and never returns ring cells.
  auto zones = select_deployment(basin, 0.5, 0.5, cfg);
  CHECK(!zones.empty());
  for (const auto& z : zones) {
    CHECK(z.reachable);
    CHECK(z.score_t >= cfg.t_th);
    CHECK(z.goal_distance <= cfg.r_max);
  }
}

TEST_CASE("lambda zero ranks purely by score") {
  GridSpec spec{0, 0, 1.0, 6, 6};
  SplitMix64 rng(93);
  Raster map(spec);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) map.at(r, c) = 0.5 + 0.5 * rng.next_double();
  }
  DeploymentConfig cfg;
  cfg.lambda = 0.0;
  cfg.t_th = 0.0;
  cfg.r_max = 100.0;
  cfg.k = 1;
  cfg.min_separation = 0.0;

  auto zones = select_deployment(map, 3.0, 3.0, cfg);
  REQUIRE(zones.size() == 1);
  double best = 0.0;
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) best = std::max(best, map(r, c));
  }
  CHECK(zones[0].score_t == best);

  // Scaling all scores by c in (0, 1] leaves the argmax cell unchanged.
  Raster scaled(spec);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) scaled.at(r, c) = 0.5 * map(r, c);
  }
  auto zones2 = select_deployment(scaled, 3.0, 3.0, cfg);
  REQUIRE(zones2.size() == 1);
  CHECK(zones2[0].row == zones[0].row);
  CHECK(zones2[0].col == zones[0].col);
}

TEST_CASE("selected zones satisfy every constraint") {
  SplitMix64 rng(94);
  DeploymentConfig cfg;
  cfg.t_th = 0.5;
  cfg.r_max = 12.0;
  cfg.k = 6;
  cfg.min_separation = 2.0;

  int runs = 0;
  for (int trial = 0; trial < 10; ++trial) {
    Raster map = random_map(rng, 24, 0.1);
    double gx = rng.uniform(1, 23), gy = rng.uniform(1, 23);
    std::vector<DeploymentCandidate> zones;
    try {
      zones = select_deployment(map, gx, gy, cfg);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::no_candidates);
      continue;
    }
    ++runs;
    for (std::size_t i = 0; i < zones.size(); ++i) {
      CHECK(zones[i].score_t >= cfg.t_th);
      CHECK(zones[i].goal_distance <= cfg.r_max);
      CHECK(zones[i].reachable);
      CHECK(zones[i].objective <= 1.0 + 1e-12);
      CHECK(zones[i].objective >= 0.0);
      for (std::size_t j = i + 1; j < zones.size(); ++j) {
        CHECK(std::hypot(zones[i].x - zones[j].x, zones[i].y - zones[j].y) >=
              cfg.min_separation);
      }
    }
  }
  CHECK(runs > 0);
}

TEST_CASE("zones csv format") {
  testsupport::TempDir tmp("zones");
  DeploymentCandidate z{4, 7, 7.5, 4.5, 0.875, 2.5, 0.9, true};
  std::string path = tmp.file("zones.csv");
  write_zones_csv({z}, path);
  std::string text = testsupport::slurp(path);
  CHECK(text ==
        "rank,row,col,x,y,T,goal_distance,objective,reachable\n"
        "1,4,7,7.5,4.5,0.875,2.5,0.9,1\n");
}
