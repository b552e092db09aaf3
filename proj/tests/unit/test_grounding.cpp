#include <doctest.h>

#include <cmath>

#include "dropzone/grounding.hpp"
#include "dropzone/rng.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace dropzone;

namespace {

Trajectory line_trajectory(std::size_t n, const Vec3& step) {
  Trajectory traj;
  for (std::size_t i = 0; i < n; ++i) {
    traj.push_back({0.1 * static_cast<double>(i), {RotationSO3::identity(), step * double(i)}});
  }
  return traj;
}

}  // namespace

TEST_CASE("relative_displacements pair counts") {
  GroundingConfig cfg;
  SplitMix64 rng(21);
  Trajectory traj5 = testsupport::random_walk_trajectory(rng, 5);

  cfg.strides = {1};
  Trajectory traj3 = testsupport::random_walk_trajectory(rng, 3);
  CHECK(relative_displacements(traj3, traj3, cfg).pairs.size() == 2);

  cfg.strides = {1, 2, 4};
  auto pairs = relative_displacements(traj5, traj5, cfg);
  CHECK(pairs.pairs.size() == 4 + 3 + 1);
  CHECK(pairs.strides_used == std::vector<int>{1, 2, 4});

  // Identical trajectories give identical displacement pairs.
  for (const auto& pr : pairs.pairs) {
    CHECK((pr.dv - pr.dp).norm() == 0.0);
  }
}

TEST_CASE("relative_displacements error cases") {
  GroundingConfig cfg;
  SplitMix64 rng(22);
  Trajectory a = testsupport::random_walk_trajectory(rng, 5);
  Trajectory b = testsupport::random_walk_trajectory(rng, 6);
  CHECK_THROWS_WITH_AS(relative_displacements(a, b, cfg), doctest::Contains("equal length"),
                       Error);

  cfg.strides = {10, 20};
  CHECK_THROWS_AS(relative_displacements(a, a, cfg), Error);  // TooShort
  try {
    relative_displacements(a, a, cfg);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::too_short);
  }

  // Oversized strides are skipped, not fatal, as long as one fits.
  cfg.strides = {1, 64};
  CHECK(relative_displacements(a, a, cfg).strides_used == std::vector<int>{1});
}

TEST_CASE("fit recovers identity for matched pairs") {
  GroundingConfig cfg;
  SplitMix64 rng(23);
  Trajectory traj = testsupport::random_walk_trajectory(rng, 12);
  auto pairs = relative_displacements(traj, traj, cfg);
  GroundingFit fit = fit_sim3_displacements(pairs, cfg);
  CHECK(std::abs(fit.scale - 1.0) < 1e-9);
  CHECK(fit.rotation.angle() < 1e-9);
  CHECK(fit.residual < 1e-18);
}

TEST_CASE("fit recovers a known scale and rotation") {
  GroundingConfig cfg;
  SplitMix64 rng(24);
  Trajectory traj_v = testsupport::random_walk_trajectory(rng, 20);
  Sim3Transform t{2.5, RotationSO3::rot_z(M_PI / 2.0), {4, -2, 1}};
  Trajectory traj_p = testsupport::apply_to_trajectory(t, traj_v);

  GroundingFit fit = fit_sim3_displacements(relative_displacements(traj_v, traj_p, cfg), cfg);
  CHECK(std::abs(fit.scale - 2.5) / 2.5 < 1e-9);
  CHECK(rotation_distance(fit.rotation, t.rotation) < 1e-9);
}

TEST_CASE("collinear motion recovers scale with zero residual") {
  GroundingConfig cfg;
  // Displacements all along x with varying lengths; rotation about the
  // motion axis is unconstrained, so only scale and residual are asserted.
  DisplacementPairs pairs;
  for (int i = 1; i <= 6; ++i) {
    Vec3 dv{0.3 * i, 0.0, 0.0};
    pairs.pairs.push_back({dv, dv * 2.0});
  }
  pairs.strides_used = {1};
  GroundingFit fit = fit_sim3_displacements(pairs, cfg);
  CHECK(std::abs(fit.scale - 2.0) / 2.0 < 1e-9);
  CHECK(fit.residual < 1e-12);
}

TEST_CASE("hover with no net motion is degenerate") {
  GroundingConfig cfg;
  Trajectory hover_v, hover_p;
  SplitMix64 rng(25);
  for (int i = 0; i < 10; ++i) {
    hover_v.push_back({0.1 * i, {RotationSO3::identity(), {1.0, 2.0, 3.0}}});
    hover_p.push_back({0.1 * i,
                       {RotationSO3::identity(),
                        {5.0 + 1e-13 * rng.gaussian(), 5.0, 5.0}}});
  }
  auto pairs = relative_displacements(hover_v, hover_p, cfg);
  CHECK_THROWS_AS(fit_sim3_displacements(pairs, cfg), Error);
  try {
    fit_sim3_displacements(pairs, cfg);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_motion);
  }
}

TEST_CASE("too few pairs is rejected") {
  GroundingConfig cfg;
  DisplacementPairs pairs;
  pairs.pairs = {{{1, 0, 0}, {1, 0, 0}}, {{0, 1, 0}, {0, 1, 0}}};
  CHECK_THROWS_AS(fit_sim3_displacements(pairs, cfg), Error);
  try {
    fit_sim3_displacements(pairs, cfg);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::insufficient_pairs);
  }
}

TEST_CASE("anchor_translation examples") {
  Trajectory at_origin = line_trajectory(3, {0, 0, 0});
  Vec3 t0 = anchor_translation(3.0, RotationSO3::rot_z(1.0), at_origin, at_origin);
  CHECK(t0.norm() == 0.0);

  Trajectory v, p;
  v.push_back({0.0, {RotationSO3::identity(), {1, 0, 0}}});
  v.push_back({1.0, {RotationSO3::identity(), {2, 0, 0}}});
  p.push_back({0.0, {RotationSO3::identity(), {5, 0, 0}}});
  p.push_back({1.0, {RotationSO3::identity(), {7, 0, 0}}});
  Vec3 t = anchor_translation(2.0, RotationSO3::identity(), v, p);
  CHECK((t - Vec3{3, 0, 0}).norm() < 1e-15);

  // Anchoring maps the first center exactly onto the platform start.
  Sim3Transform full{2.0, RotationSO3::identity(), t};
  CHECK((apply_sim3_point(full, v[0].pose.translation) - p[0].pose.translation).norm() == 0.0);

  CHECK_THROWS_AS(anchor_translation(1.0, RotationSO3::identity(), Trajectory{}, p), Error);
}

TEST_CASE("ground applies the transform and tags frames") {
  SplitMix64 rng(26);
  Trajectory traj = testsupport::random_walk_trajectory(rng, 8);
  LabeledPointCloud cloud;
  for (int i = 0; i < 20; ++i) {
    cloud.push_back({{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)},
                     classes::kGrass, 0.8});
  }

  auto [same_traj, same_cloud] = ground(traj, cloud, Sim3Transform::identity());
  CHECK(same_traj.frame() == FrameId::metric);
  CHECK(same_cloud.frame() == FrameId::metric);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK((same_cloud[i].position - cloud[i].position).norm() == 0.0);
    CHECK(same_cloud[i].class_id == cloud[i].class_id);
    CHECK(same_cloud[i].confidence == cloud[i].confidence);
  }

  Sim3Transform t = testsupport::random_sim3(rng);
  auto [gt, gc] = ground(traj, cloud, t);
  double d_in = distance(cloud[0].position, cloud[1].position);
  double d_out = distance(gc[0].position, gc[1].position);
  CHECK(std::abs(d_out - t.scale * d_in) / d_out < 1e-12);
}

TEST_CASE("full grounding recovers a synthetic similarity end to end") {
  GroundingConfig cfg;
  SplitMix64 rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    Trajectory traj_v = testsupport::random_walk_trajectory(rng, 20 + trial);
    Sim3Transform t = testsupport::random_sim3(rng);
    Trajectory traj_p = testsupport::apply_to_trajectory(t, traj_v);

    GroundingFit fit = fit_sim3_displacements(relative_displacements(traj_v, traj_p, cfg), cfg);
    Vec3 trans = anchor_translation(fit.scale, fit.rotation, traj_v, traj_p);
    Sim3Transform recovered{fit.scale, fit.rotation, trans};

    auto [grounded, cloud] = ground(traj_v, LabeledPointCloud{}, recovered);
    double worst = 0.0;
    for (std::size_t i = 0; i < grounded.size(); ++i) {
      worst = std::max(worst,
                       (grounded[i].pose.translation - traj_p[i].pose.translation).norm());
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("fit residual never beats the trivial transform") {
  GroundingConfig cfg;
  SplitMix64 rng(28);
  for (int trial = 0; trial < 20; ++trial) {
    Trajectory traj_v = testsupport::random_walk_trajectory(rng, 15);
    Trajectory traj_p = testsupport::random_walk_trajectory(rng, 15);
    auto pairs = relative_displacements(traj_v, traj_p, cfg);
    GroundingFit fit = fit_sim3_displacements(pairs, cfg);
    double trivial = displacement_residual(pairs, 1.0, RotationSO3::identity());
    CHECK(fit.residual <= trivial + 1e-9);
  }
}

TEST_CASE("umeyama core agrees with the external reference") {
  SplitMix64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vec3> src, dst;
    Sim3Transform t = testsupport::random_sim3(rng, 0.5, 4.0);
    for (int i = 0; i < 30; ++i) {
      Vec3 p{rng.gaussian(), rng.gaussian(), rng.gaussian()};
      src.push_back(p);
      // Perturb so the fit is non-trivial.
      Vec3 q = apply_sim3_point(t, p) + Vec3{0.01 * rng.gaussian(), 0.01 * rng.gaussian(),
                                             0.01 * rng.gaussian()};
      dst.push_back(q);
    }
    ScaleRotation mine = umeyama_scale_rotation(src, dst);
    oracles::SimParts ref = oracles::eigen_umeyama(src, dst);
    CHECK(std::abs(mine.scale - ref.scale) / ref.scale < 1e-9);
    CHECK((mine.rotation.matrix() - ref.rotation).norm() < 1e-9);
  }
}

TEST_CASE("noise robustness sanity (full sweep in acceptance)") {
  GroundingConfig cfg;
  for (int trial = 0; trial < 10; ++trial) {
    SplitMix64 rng(1000 + trial);
    std::size_t n = 20 + rng.next_below(61);
    Trajectory traj_v = testsupport::random_walk_trajectory(rng, n);
    Sim3Transform t = testsupport::random_sim3(rng);
    Trajectory traj_p = testsupport::apply_to_trajectory(t, traj_v);

    auto pairs = relative_displacements(traj_v, traj_p, cfg);
    double mean_norm = 0.0;
    for (const auto& pr : pairs.pairs) mean_norm += pr.dp.norm();
    mean_norm /= static_cast<double>(pairs.pairs.size());
    double sigma = 0.01 * mean_norm;
    for (auto& pr : pairs.pairs) {
      pr.dp = pr.dp + Vec3{sigma * rng.gaussian(), sigma * rng.gaussian(),
                           sigma * rng.gaussian()};
    }
    GroundingFit fit = fit_sim3_displacements(pairs, cfg);
    CHECK(std::abs(fit.scale - t.scale) / t.scale < 0.02);
  }
}
