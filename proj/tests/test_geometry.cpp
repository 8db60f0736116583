#include <spherecon/geometry.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>

using namespace spherecon;

namespace {

Eigen::Vector3d e(int i) {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  v(i) = 1.0;
  return v;
}

}  // namespace

TEST(UnitVectorTest, ConstructionEnforcesNorm) {
  EXPECT_NO_THROW(UnitVector(Eigen::Vector3d(1.0, 0.0, 0.0)));
  EXPECT_THROW(UnitVector(Eigen::Vector3d(1.0, 1.0, 0.0)), std::invalid_argument);
  const auto u = UnitVector::normalized(Eigen::Vector3d(3.0, 4.0, 0.0));
  EXPECT_NEAR(u.coords().norm(), 1.0, 1e-15);
  EXPECT_THROW(UnitVector::normalized(Eigen::Vector3d::Zero()), std::invalid_argument);
}

TEST(TangentVectorTest, OrthogonalityEnforced) {
  const UnitVector base(Eigen::Vector3d(1.0, 0.0, 0.0));
  EXPECT_NO_THROW(TangentVector(base, Eigen::Vector3d(0.0, 2.0, 0.0)));
  EXPECT_THROW(TangentVector(base, Eigen::Vector3d(0.5, 1.0, 0.0)), std::invalid_argument);
}

TEST(ProjectTest, KillsNormalComponent) {
  const UnitVector x(e(0));
  EXPECT_NEAR(project(x, e(0)).coords().norm(), 0.0, 1e-15);
  EXPECT_NEAR((project(x, e(1)).coords() - e(1)).norm(), 0.0, 1e-15);
  const auto t = project(x, Eigen::Vector3d(1.0, 1.0, 0.0));
  EXPECT_NEAR((t.coords() - e(1)).norm(), 0.0, 1e-15);
}

TEST(ProjectTest, IdempotentAndSelfAdjoint) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = sample_unit_sphere(3, rng);
    Eigen::VectorXd u(4), v(4);
    for (int i = 0; i < 4; ++i) {
      u(i) = standard_normal(rng);
      v(i) = standard_normal(rng);
    }
    const auto pu = project(x, u);
    const auto ppu = project(x, pu.coords());
    EXPECT_NEAR((pu.coords() - ppu.coords()).norm(), 0.0, 1e-13);
    EXPECT_NEAR(pu.coords().dot(v), u.dot(project(x, v).coords()), 1e-12);
  }
}

TEST(SkewTest, CrossProductMatrix) {
  const Eigen::Vector3d z(0.0, 0.0, 1.0);
  EXPECT_NEAR((skew(z) * e(0) - e(1)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(skew(Eigen::Vector3d::Zero()).norm(), 0.0, 0.0);
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Vector3d w, y;
    for (int i = 0; i < 3; ++i) {
      w(i) = standard_normal(rng);
      y(i) = standard_normal(rng);
    }
    EXPECT_NEAR((skew(w) * y - w.cross(y)).norm(), 0.0, 1e-14);
    EXPECT_NEAR((unskew(skew(w)) - w).norm(), 0.0, 0.0);
  }
}

TEST(SkewTest, UnskewRejectsNonAntisymmetric) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  EXPECT_THROW(unskew(m), std::invalid_argument);
}

TEST(GeodesicChordalTest, ReferencePairs) {
  const UnitVector a(e(0)), b(e(1));
  const UnitVector minus_a(Eigen::Vector3d(-1.0, 0.0, 0.0));
  auto same = geodesic_and_chordal(a, a);
  EXPECT_NEAR(same.angle, 0.0, 1e-15);
  EXPECT_NEAR(same.s, 0.0, 1e-15);
  auto anti = geodesic_and_chordal(a, minus_a);
  EXPECT_NEAR(anti.angle, std::numbers::pi, 1e-15);
  EXPECT_NEAR(anti.s, 2.0, 1e-15);
  auto ortho = geodesic_and_chordal(a, b);
  EXPECT_NEAR(ortho.angle, std::numbers::pi / 2.0, 1e-15);
  EXPECT_NEAR(ortho.s, 1.0, 1e-15);
}

TEST(GeodesicChordalTest, InvariantUnderCommonRotation) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = sample_unit_sphere(2, rng);
    const auto y = sample_unit_sphere(2, rng);
    const Eigen::MatrixXd q = testing::random_rotation_matrix(3, rng);
    const auto before = geodesic_and_chordal(x, y);
    const auto after = geodesic_and_chordal(UnitVector::normalized(q * x.coords()),
                                            UnitVector::normalized(q * y.coords()));
    EXPECT_NEAR(before.s, after.s, 1e-12);
    EXPECT_NEAR(before.s, 1.0 - std::cos(before.angle), 1e-14);
  }
}

TEST(SampleSphereTest, DeterministicForFixedSeed) {
  Rng rng_a(42), rng_b(42);
  const auto a = sample_unit_sphere(2, rng_a);
  const auto b = sample_unit_sphere(2, rng_b);
  EXPECT_EQ(a.coords(), b.coords());
  // golden values frozen from this implementation's stream at seed 42
  EXPECT_NEAR(a.coords()(0), 0.2466721精度, 1e-7);
}

TEST(SampleSphereTest, UnitNormAlways) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    for (int dim : {1, 2, 3, 5}) {
      EXPECT_NEAR(sample_unit_sphere(dim, rng).coords().norm(), 1.0, 1e-12);
    }
  }
}

TEST(SampleSphereTest, CoordinateMeansVanish) {
  Rng rng(12345);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) mean += sample_unit_sphere(2, rng).coords();
  mean /= samples;
  for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(mean(k)), 0.02);
}

TEST(SampleSphereTest, OctantChiSquareUniform) {
  Rng rng(777);
  std::array<int, 8> counts{};
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) {
    const auto x = sample_unit_sphere(2, rng).coords();
    const int octant = (x(0) > 0 ? 1 : 0) | (x(1) > 0 ? 2 : 0) | (x(2) > 0 ? 4 : 0);
    ++counts[octant];
  }
  const double expected = samples / 8.0;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 7 degrees of freedom, significance 0.001
  EXPECT_LT(chi2, 24.322);
}

TEST(QuaternionTest, ReferenceRotations) {
  const auto identity = quaternion_to_rotation(Eigen::Vector4d(1.0, 0.0, 0.0, 0.0));
  EXPECT_NEAR((identity.matrix() - Eigen::Matrix3d::Identity()).norm(), 0.0, 1e-15);
  const auto flip = quaternion_to_rotation(Eigen::Vector4d(0.0, 1.0, 0.0, 0.0));
  Eigen::Matrix3d expected = Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
  EXPECT_NEAR((flip.matrix() - expected).norm(), 0.0, 1e-15);
}

TEST(QuaternionTest, SignIrrelevant) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Vector4d q;
    for (int i = 0; i < 4; ++i) q(i) = standard_normal(rng);
    const auto r_plus = quaternion_to_rotation(q);
    const auto r_minus = quaternion_to_rotation(-q);
    EXPECT_NEAR((r_plus.matrix() - r_minus.matrix()).norm(), 0.0, 1e-14);
  }
}

TEST(SampleRotationTest, ValidAndCentered) {
  Rng rng(100);
  Eigen::Matrix3d mean = Eigen::Matrix3d::Zero();
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    const auto r = sample_uniform_rotation(rng);
    EXPECT_NEAR(std::abs(r.matrix().determinant() - 1.0), 0.0, 1e-10);
    mean += r.matrix();
  }
  mean /= samples;
  EXPECT_LT(mean.norm(), 0.05);  // Haar mean is the zero matrix
}

TEST(RotationExpTest, MatchesRodrigues) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::Vector3d w;
    for (int i = 0; i < 3; ++i) w(i) = standard_normal(rng);
    const Eigen::Matrix3d r = rotation_exp(w);
    EXPECT_NEAR((r.transpose() * r - Eigen::Matrix3d::Identity()).norm(), 0.0, 1e-13);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
    // angle of the result equals |w| (mod 2 pi)
    const double angle = std::acos(std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0));
    const double expected = std::fmod(w.norm(), 2.0 * std::numbers::pi);
    EXPECT_NEAR(angle, expected > std::numbers::pi ? 2.0 * std::numbers::pi - expected : expected,
                1e-10);
  }
  // tiny-angle branch
  const Eigen::Vector3d tiny(1e-8, -2e-8, 5e-9);
  EXPECT_NEAR((rotation_exp(tiny) - (Eigen::Matrix3d::Identity() + skew(tiny))).norm(), 0.0, 1e-15);
}
