#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "sqcc/errors.hpp"
#include "sqcc/gaussian.hpp"

namespace {

using Mat4 = Eigen::Matrix4d;

Mat4 full_matrix(const sqcc::TwoModeCM& cm) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(1, 1) = cm.a;
  m(2, 2) = m(3, 3) = cm.b;
  m(0, 2) = m(2, 0) = cm.c;
  m(1, 3) = m(3, 1) = -cm.c;
  return m;
}

// Moduli of the eigenvalues of i*Omega*sigma come in equal pairs; return
// the two distinct ones, largest first.
std::pair<double, double> oracle_spectrum(const Mat4& sigma) {
  Mat4 omega = Mat4::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  Eigen::EigenSolver<Mat4> solver(omega * sigma);
  std::vector<double> mods;
  for (int i = 0; i < 4; ++i) mods.push_back(std::abs(solver.eigenvalues()[i]));
  std::sort(mods.begin(), mods.end());
  return {0.5 * (mods[2] + mods[3]), 0.5 * (mods[0] + mods[1])};
}

double g_oracle(double x) {
  if (x < 1.0 + 1e-12) return 0.0;
  const double p = 0.5 * (x + 1.0);
  const double m = 0.5 * (x - 1.0);
  return p * std::log2(p) - m * std::log2(m);
}

// TMSV of variance v through a thermal-loss channel.
sqcc::TwoModeCM random_physical(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> v_dist(1.0, 60.0);
  std::uniform_real_distribution<double> t_dist(1e-3, 1.0);
  std::uniform_real_distribution<double> w_dist(1.0, 5.0);
  const double v = v_dist(rng);
  const double t = t_dist(rng);
  const double w = w_dist(rng);
  return {v, t * v + (1.0 - t) * w, std::sqrt(t * (v * v - 1.0))};
}

}  // namespace

TEST(Gaussian, AgreesWithFourByFourOracleOnRandomMatrices) {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 1000; ++i) {
    const auto cm = random_physical(rng);
    const auto [l1, l2] = oracle_spectrum(full_matrix(cm));
    const auto spec = sqcc::symplectic_eigenvalues(cm);
    const double tol = 1e-9 * std::max(1.0, l1);
    ASSERT_NEAR(spec.lambda1, l1, tol) << "a=" << cm.a << " b=" << cm.b << " c=" << cm.c;
    ASSERT_NEAR(spec.lambda2, l2, tol) << "a=" << cm.a << " b=" << cm.b << " c=" << cm.c;
    ASSERT_NEAR(sqcc::entropy_of_cm(cm), g_oracle(l1) + g_oracle(l2), 1e-9);
    ASSERT_GE(spec.lambda2, 1.0 - sqcc::kPhysicalTolerance);
  }
}

TEST(Gaussian, HeterodyneConditioningMatchesSchurComplement) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto cm = random_physical(rng);
    const Mat4 s = full_matrix(cm);
    const Eigen::Matrix2d sa = s.topLeftCorner<2, 2>();
    const Eigen::Matrix2d sb = s.bottomRightCorner<2, 2>();
    const Eigen::Matrix2d sc = s.topRightCorner<2, 2>();
    const Eigen::Matrix2d cond =
        sa - sc * (sb + Eigen::Matrix2d::Identity()).inverse() * sc.transpose();
    const double lambda = std::sqrt(cond.determinant());
    EXPECT_NEAR(sqcc::conditional_after_heterodyne(cm), lambda, 1e-9 * std::max(1.0, lambda));
    EXPECT_NEAR(cond(0, 1), 0.0, 1e-12);
  }
}

TEST(Gaussian, PureStatesHaveZeroEntropy) {
  EXPECT_EQ(sqcc::entropy_of_cm({1.0, 1.0, 0.0}), 0.0);
  const double v = 25.0;
  const sqcc::TwoModeCM tmsv{v, v, std::sqrt(v * v - 1.0)};
  const auto spec = sqcc::symplectic_eigenvalues(tmsv);
  EXPECT_NEAR(spec.lambda1, 1.0, 1e-9);
  EXPECT_NEAR(spec.lambda2, 1.0, 1e-9);
  EXPECT_NEAR(sqcc::entropy_of_cm(tmsv), 0.0, 1e-7);
}

TEST(Gaussian, BosonicEntropyValues) {
  EXPECT_DOUBLE_EQ(sqcc::bosonic_entropy(3.0), 2.0);
  EXPECT_EQ(sqcc::bosonic_entropy(1.0), 0.0);
  EXPECT_EQ(sqcc::bosonic_entropy(1.0 + 1e-10), 0.0);
  EXPECT_EQ(sqcc::bosonic_entropy(1.0 - 1e-10), 0.0);
  EXPECT_THROW(sqcc::bosonic_entropy(0.5), sqcc::DomainError);
  double prev = 0.0;
  for (double x = 1.1; x < 100.0; x *= 1.3) {
    const double g = sqcc::bosonic_entropy(x);
    EXPECT_GT(g, prev);
    prev = g;
  }
}

TEST(Gaussian, RejectsBadInput) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(sqcc::symplectic_eigenvalues({nan, 1.0, 0.0}), sqcc::NonFiniteInput);
  EXPECT_THROW(sqcc::symplectic_eigenvalues({-1.0, 1.0, 0.0}), sqcc::DomainError);
  EXPECT_THROW(sqcc::symplectic_eigenvalues({1.0, 3.0, 2.5}), sqcc::NegativeDiscriminant);
}

TEST(Gaussian, SymmetricMatrixInvariants) {
  const sqcc::TwoModeCM cm{5.0, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(cm.delta(), 25.0 + 9.0 - 8.0);
  EXPECT_DOUBLE_EQ(cm.det(), (15.0 - 4.0) * (15.0 - 4.0));
  const auto s = sqcc::symplectic_eigenvalues(cm);
  EXPECT_NEAR(s.lambda1 * s.lambda2, std::sqrt(cm.det()), 1e-12);
  EXPECT_NEAR(s.lambda1 * s.lambda1 + s.lambda2 * s.lambda2, cm.delta(), 1e-12);
}
