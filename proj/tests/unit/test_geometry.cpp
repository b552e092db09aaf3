#include <doctest.h>

#include <cmath>

#include "dropzone/geometry.hpp"
#include "dropzone/rng.hpp"
#include "support/helpers.hpp"

using namespace dropzone;

namespace {
double vec_err(const Vec3& a, const Vec3& b) { return (a - b).norm(); }
}  // namespace

TEST_CASE("apply_sim3_point basic cases") {
  Vec3 p{1.0, 2.0, 3.0};
  CHECK(vec_err(apply_sim3_point(Sim3Transform::identity(), p), p) == 0.0);

  Sim3Transform scale2{2.0, RotationSO3::identity(), {0, 0, 0}};
  CHECK(vec_err(apply_sim3_point(scale2, {1, 0, 0}), {2, 0, 0}) < 1e-15);

  Sim3Transform t{2.0, RotationSO3::rot_z(M_PI / 2.0), {3, 0, 0}};
  CHECK(vec_err(apply_sim3_point(t, {1, 1, 0}), {1, 2, 0}) < 1e-12);
}

TEST_CASE("apply_sim3_pose basic cases") {
  PoseSE3 p;
  p.translation = {0, 0, 2};
  CHECK(vec_err(apply_sim3_pose(Sim3Transform::identity(), p).translation, p.translation) == 0.0);

  Sim3Transform t{3.0, RotationSO3::identity(), {1, 1, 1}};
  CHECK(vec_err(apply_sim3_pose(t, p).translation, {1, 1, 7}) < 1e-15);
}

TEST_CASE("pose translation transforms like a point") {
  SplitMix64 rng(11);
  for (int i = 0; i < 50; ++i) {
    Sim3Transform t = testsupport::random_sim3(rng);
    PoseSE3 p{testsupport::random_rotation(rng),
              {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)}};
    CHECK(vec_err(apply_sim3_pose(t, p).translation, apply_sim3_point(t, p.translation)) == 0.0);
  }
}

TEST_CASE("composition matches sequential application") {
  SplitMix64 rng(12);
  for (int i = 0; i < 50; ++i) {
    Sim3Transform t1 = testsupport::random_sim3(rng);
    Sim3Transform t2 = testsupport::random_sim3(rng);
    Vec3 p{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    Vec3 sequential = apply_sim3_point(t2, apply_sim3_point(t1, p));
    Vec3 composed = apply_sim3_point(compose(t2, t1), p);
    CHECK(vec_err(sequential, composed) < 1e-9);
  }
}

TEST_CASE("inverse recovers the input") {
  SplitMix64 rng(13);
  for (int i = 0; i < 50; ++i) {
    Sim3Transform t = testsupport::random_sim3(rng);
    Vec3 p{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    CHECK(vec_err(apply_sim3_point(t.inverse(), apply_sim3_point(t, p)), p) < 1e-9);
  }
}

TEST_CASE("distances scale exactly") {
  SplitMix64 rng(14);
  for (int i = 0; i < 50; ++i) {
    Sim3Transform t = testsupport::random_sim3(rng);
    Vec3 p{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    Vec3 q{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    double lhs = distance(apply_sim3_point(t, p), apply_sim3_point(t, q));
    double rhs = t.scale * distance(p, q);
    CHECK(std::abs(lhs - rhs) / rhs < 1e-9);
  }
}

TEST_CASE("rotation construction validates and repairs") {
  Eigen::Matrix3d good = Eigen::Matrix3d::Identity();
  CHECK(RotationSO3::from_matrix(good).angle() == 0.0);

  // Mild non-orthonormality gets repaired onto SO(3).
  Eigen::Matrix3d drifted = RotationSO3::rot_z(0.3).matrix();
  drifted(0, 0) += 5e-4;
  RotationSO3 repaired = RotationSO3::from_matrix(drifted);
  Eigen::Matrix3d gram = repaired.matrix().transpose() * repaired.matrix();
  CHECK((gram - Eigen::Matrix3d::Identity()).array().abs().maxCoeff() < 1e-12);

  // Far from a rotation: rejected.
  Eigen::Matrix3d bad = Eigen::Matrix3d::Identity() * 2.0;
  CHECK_THROWS_AS(RotationSO3::from_matrix(bad), Error);

  // Reflections (det = -1) are not rotations.
  Eigen::Matrix3d mirror = Eigen::Matrix3d::Identity();
  mirror(2, 2) = -1.0;
  CHECK_THROWS_AS(RotationSO3::from_matrix(mirror), Error);
}

TEST_CASE("quaternion boundary round trip") {
  SplitMix64 rng(15);
  for (int i = 0; i < 50; ++i) {
    RotationSO3 r = testsupport::random_rotation(rng);
    auto q = r.quaternion_xyzw();
    RotationSO3 back = RotationSO3::from_quaternion_xyzw(q[0], q[1], q[2], q[3]);
    CHECK(rotation_distance(r, back) < 1e-12);
  }
  CHECK_THROWS_AS(RotationSO3::from_quaternion_xyzw(1.0, 1.0, 1.0, 1.0), Error);
  // Slightly denormalized quaternions are normalized, not rejected.
  auto q = RotationSO3::rot_z(0.5).quaternion_xyzw();
  double f = 1.0 + 5e-4;
  RotationSO3 r = RotationSO3::from_quaternion_xyzw(q[0] * f, q[1] * f, q[2] * f, q[3] * f);
  CHECK(rotation_distance(r, RotationSO3::rot_z(0.5)) < 1e-9);
}

TEST_CASE("rotation angle is accurate near identity") {
  RotationSO3 tiny = RotationSO3::rot_z(1e-10);
  CHECK(tiny.angle() == doctest::Approx(1e-10).epsilon(1e-4));
  CHECK(RotationSO3::identity().angle() == 0.0);
  CHECK(RotationSO3::rot_z(M_PI / 3).angle() == doctest::Approx(M_PI / 3).epsilon(1e-12));
}
