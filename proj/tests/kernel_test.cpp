#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "rcf/errors.hpp"
#include "rcf/kernel.hpp"
#include "rcf/verify/oracles.hpp"
#include "test_support.hpp"

using namespace rcf;
using rcf::testing::Rng;

TEST(GaussianCorrelation, SelfPeakIsOne) {
  Rng rng(8);
  const FeatureMap<double> a = rcf::testing::random_features(rng, 7, 9, 2);
  const auto kc = gaussian_correlation(a, a, 0.5);
  EXPECT_NEAR(kc.k(0, 0), 1.0, 1e-12);
}

TEST(GaussianCorrelation, ZeroInputsGiveOnes) {
  FeatureMap<double> z({RealGrid::Zero(4, 4)}, 1);
  const auto kc = gaussian_correlation(z, z, 0.5);
  EXPECT_LE((kc.k - 1).abs().maxCoeff(), 1e-15);
}

TEST(GaussianCorrelation, MatchesExplicitShifts) {
  Rng rng(9);
  for (int i = 0; i < 10; ++i) {
    const int h = rcf::testing::random_int(rng, 2, 9), w = rcf::testing::random_int(rng, 2, 9);
    const int ch = rcf::testing::random_int(rng, 1, 4);
    const FeatureMap<double> a = rcf::testing::random_features(rng, h, w, ch);
    const FeatureMap<double> b = rcf::testing::random_features(rng, h, w, ch);
    const double sigma = rcf::testing::random_real(rng, 0.2, 2);
    const RealGrid want = verify::explicit_gaussian_correlation(a, b, sigma);
    EXPECT_LE((gaussian_correlation(a, b, sigma).k - want).abs().maxCoeff(), 1e-12);
  }
}

TEST(GaussianCorrelation, SymmetryAndRange) {
  Rng rng(10);
  for (int i = 0; i < 10; ++i) {
    const FeatureMap<double> a = rcf::testing::random_features(rng, 6, 8, 2);
    const FeatureMap<double> b = rcf::testing::random_features(rng, 6, 8, 2);
    const RealGrid kab = gaussian_correlation(a, b, 0.7).k;
    const RealGrid kba = gaussian_correlation(b, a, 0.7).k;
    for (int u = 0; u < 6; ++u)
      for (int v = 0; v < 8; ++v) EXPECT_NEAR(kab(u, v), kba((6 - u) % 6, (8 - v) % 8), 1e-12);
    EXPECT_GT(kab.minCoeff(), 0);
    EXPECT_LE(kab.maxCoeff(), 1 + 1e-12);
  }
}

TEST(GaussianCorrelation, RejectsBadInputs) {
  Rng rng(11);
  const FeatureMap<double> a = rcf::testing::random_features(rng, 4, 4);
  const FeatureMap<double> b = rcf::testing::random_features(rng, 4, 5);
  EXPECT_THROW(gaussian_correlation(a, b, 0.5), InvalidInput);
  EXPECT_THROW(gaussian_correlation(a, a, 0.0), InvalidInput);
}

TEST(KernelMatrix, TwoByOne) {
  FeatureMap<double> a({RealGrid(RealGrid::Constant(2, 1, 0.3))}, 1);
  a.channels[0](1, 0) = -0.4;
  const Eigen::MatrixXd k = verify::build_explicit_kernel_matrix(a, 0.5);
  EXPECT_DOUBLE_EQ(k(0, 0), 1);
  EXPECT_DOUBLE_EQ(k(1, 1), 1);
  EXPECT_NEAR(k(0, 1), k(1, 0), 1e-15);
  const RealGrid k1 = gaussian_correlation(a, a, 0.5).k;
  EXPECT_NEAR(k(0, 1), k1(1, 0), 1e-12);
}

TEST(KernelMatrix, EigenvaluesAreSpectrumOfFirstRow) {
  Rng rng(12);
  for (int i = 0; i < 5; ++i) {
    const FeatureMap<double> a = rcf::testing::random_features(rng, 4, 5, 2);
    const Eigen::MatrixXd k = verify::build_explicit_kernel_matrix(a, 0.6);
    Eigen::VectorXd dense = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k).eigenvalues();
    const ComplexSpectrum kh = gaussian_correlation(a, a, 0.6).k_hat;
    std::vector<double> spec;
    for (Eigen::Index j = 0; j < kh.size(); ++j) {
      EXPECT_LE(std::abs(kh.data()[j].imag()), 1e-10);
      spec.push_back(kh.data()[j].real());
    }
    std::sort(spec.begin(), spec.end());
    for (Eigen::Index j = 0; j < dense.size(); ++j) EXPECT_NEAR(dense[j], spec[j], 1e-8);
  }
}

TEST(KernelMatrix, RefusesLargeGrids) {
  FeatureMap<double> a({RealGrid::Zero(17, 4)}, 1);
  EXPECT_THROW(verify::build_explicit_kernel_matrix(a, 0.5), InvalidInput);
}
