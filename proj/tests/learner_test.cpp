#include <gtest/gtest.h>

#include "rcf/errors.hpp"
#include "rcf/kernel.hpp"
#include "rcf/learner.hpp"
#include "rcf/verify/oracles.hpp"
#include "rcf/verify/selftest.hpp"
#include "test_support.hpp"

using namespace rcf;
using rcf::testing::Rng;

namespace {

struct Instance {
  FeatureMap<double> x;
  RealGrid y;
  ComplexSpectrum k_hat;
};

Instance make_instance(Rng& rng, int n, double sigma = 0.5) {
  Instance in{rcf::testing::random_features(rng, n, n, 1, -0.5, 0.5), gaussian_labels<double>(n, n, default_label_sigma(n, n)), {}};
  in.k_hat = gaussian_correlation(in.x, in.x, sigma).k_hat;
  return in;
}

}  // namespace

TEST(SolveAlpha, NoErrorBudgetLeftGivesZero) {
  Rng rng(20);
  const Instance in = make_instance(rng, 8);
  const ComplexSpectrum y_hat = dft2(in.y);
  EXPECT_EQ(solve_alpha(y_hat, y_hat, in.k_hat, 1e-4).abs().maxCoeff(), 0);
}

TEST(SolveAlpha, ConstantSpectrum) {
  Rng rng(21);
  const ComplexSpectrum y_hat = dft2(rcf::testing::random_grid(rng, 5, 5));
  const ComplexSpectrum k_hat = ComplexSpectrum::Constant(5, 5, 2.0);
  const ComplexSpectrum a = solve_alpha(y_hat, ComplexSpectrum(ComplexSpectrum::Zero(5, 5)), k_hat, 0.5);
  EXPECT_LE((a - y_hat / 2.5).abs().maxCoeff(), 1e-15);
}

TEST(SolveAlpha, MatchesDenseSolve) {
  Rng rng(22);
  for (int i = 0; i < 10; ++i) {
    const Instance in = make_instance(rng, 8);
    const RealGrid e = i % 2 ? rcf::testing::random_grid(rng, 8, 8, -0.2, 0.2) : RealGrid(RealGrid::Zero(8, 8));
    const Eigen::MatrixXd k = verify::build_explicit_kernel_matrix(in.x, 0.5);
    const RealGrid dense = verify::dense_ridge_solve(k, in.y, e, 1e-4);
    const RealGrid fast = idft2(solve_alpha(dft2(in.y), dft2(e), in.k_hat, 1e-4));
    EXPECT_LE((fast - dense).abs().maxCoeff(), 1e-8);
  }
}

TEST(SolveAlpha, SingularBinIsNamed) {
  ComplexSpectrum k_hat = ComplexSpectrum::Ones(4, 4);
  k_hat(1, 2) = -1e-4;
  const ComplexSpectrum y_hat = ComplexSpectrum::Ones(4, 4);
  try {
    solve_alpha(y_hat, ComplexSpectrum(ComplexSpectrum::Zero(4, 4)), k_hat, 1e-4);
    FAIL() << "expected Singularity";
  } catch (const Singularity& e) {
    EXPECT_NE(std::string(e.what()).find("(1, 2)"), std::string::npos) << e.what();
  }
}

TEST(Objective, ZeroFilterIsLabelEnergy) {
  Rng rng(23);
  const Instance in = make_instance(rng, 6);
  const double j = objective(in.k_hat, in.y, ComplexSpectrum(ComplexSpectrum::Zero(6, 6)), RealGrid(RealGrid::Zero(6, 6)),
                             LearnerParams{});
  EXPECT_NEAR(j, in.y.square().sum(), 1e-12);
}

TEST(Objective, MatchesDenseEvaluation) {
  Rng rng(24);
  for (int i = 0; i < 5; ++i) {
    const Instance in = make_instance(rng, 8);
    const RealGrid alpha = rcf::testing::random_grid(rng, 8, 8);
    const RealGrid e = rcf::testing::random_grid(rng, 8, 8, -0.3, 0.3);
    LearnerParams p;
    p.loss = LossKind::L2;
    p.lambda = 0.3;
    const Eigen::MatrixXd k = verify::build_explicit_kernel_matrix(in.x, 0.5);
    const double dense = verify::dense_ridge_objective(k, alpha, in.y, e, p.lambda);
    EXPECT_NEAR(objective(in.k_hat, in.y, dft2(alpha), e, p), dense, 1e-8 * (1 + dense));
  }
}

TEST(Train, L2IsSingleClosedFormStep) {
  Rng rng(25);
  const Instance in = make_instance(rng, 16);
  LearnerParams p;
  p.loss = LossKind::L2;
  const auto r = train(in.k_hat, in.y, p);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.error.abs().maxCoeff(), 0);
  const ComplexSpectrum want = dft2(in.y) / (in.k_hat + 1e-4);
  EXPECT_LE((r.alpha_hat - want).abs().maxCoeff(), 1e-12 * want.abs().maxCoeff());
}

TEST(Train, HugeTauCollapsesToRidge) {
  Rng rng(26);
  const Instance in = make_instance(rng, 16);
  LearnerParams l2;
  l2.loss = LossKind::L2;
  const auto base = train(in.k_hat, in.y, l2);
  for (LossKind k : {LossKind::L1, LossKind::L1L2}) {
    LearnerParams p;
    p.loss = k;
    p.tau = 1e6;
    const auto r = train(in.k_hat, in.y, p);
    EXPECT_EQ(r.error.abs().maxCoeff(), 0);
    EXPECT_LE((r.alpha_hat - base.alpha_hat).abs().maxCoeff(), 1e-12 * base.alpha_hat.abs().maxCoeff());
  }
}

TEST(Train, DefaultL1OnRandomInstance) {
  Rng rng(27);
  const Instance in = make_instance(rng, 32);
  const auto r = train(in.k_hat, in.y, LearnerParams{});
  EXPECT_LE(r.iterations, 100);
  EXPECT_EQ(r.objective_trace.size(), static_cast<std::size_t>(r.iterations));
  for (std::size_t t = 1; t < r.objective_trace.size(); ++t)
    EXPECT_LE(r.objective_trace[t], r.objective_trace[t - 1] + 1e-9);
}

TEST(Train, AlphaStepIsBlockOptimal) {
  Rng rng(28);
  for (int i = 0; i < 5; ++i) {
    const Instance in = make_instance(rng, 8);
    LearnerParams p;
    p.loss = LossKind::L1;
    p.tau = 0.5;
    p.max_iters = 3;
    const auto r = train(in.k_hat, in.y, p);
    const double j = objective(in.k_hat, in.y, r.alpha_hat, r.error, p);
    // The last alpha step used the previous error map; re-solve for the current one.
    const ComplexSpectrum a = solve_alpha(dft2(in.y), dft2(r.error), in.k_hat, p.lambda);
    const double best = objective(in.k_hat, in.y, a, r.error, p);
    EXPECT_LE(best, j + 1e-12);
    for (int t = 0; t < 10; ++t) {
      const RealGrid d = rcf::testing::random_grid(rng, 8, 8, -1e-2, 1e-2);
      EXPECT_LE(best, objective(in.k_hat, in.y, ComplexSpectrum(a + dft2(d)), r.error, p) + 1e-12);
    }
  }
}

TEST(Train, ErrorStepIsBlockOptimal) {
  Rng rng(29);
  for (LossKind k : {LossKind::L1, LossKind::L1L2}) {
    const Instance in = make_instance(rng, 8);
    LearnerParams p;
    p.loss = k;
    p.tau = 0.3;
    p.max_iters = 2;
    const auto r = train(in.k_hat, in.y, p);
    const double j = objective(in.k_hat, in.y, r.alpha_hat, r.error, p);
    for (int t = 0; t < 20; ++t) {
      const RealGrid d = rcf::testing::random_grid(rng, 8, 8, -1e-2, 1e-2);
      EXPECT_LE(j, objective(in.k_hat, in.y, r.alpha_hat, RealGrid(r.error + d), p) + 1e-12);
    }
  }
}

TEST(Train, ObjectiveNeverRises) {
  for (LossKind k : {LossKind::L2, LossKind::L1, LossKind::L1L2, LossKind::L21}) {
    EXPECT_TRUE(verify::check_descent(k, 5, 16).passed) << to_string(k);
    EXPECT_TRUE(verify::check_descent(k, 3, 16, {}, {.windowed = true}).passed) << to_string(k);
  }
  for (double tau : {0.1, 1.0, 10.0}) {
    EXPECT_TRUE(verify::check_descent(LossKind::L1, 3, 16, {}, {.tau = tau}).passed) << tau;
    EXPECT_TRUE(verify::check_descent(LossKind::L1L2, 3, 16, {}, {.tau = tau}).passed) << tau;
  }
}

TEST(Train, NonFiniteObjectiveRaisesDivergence) {
  const RealGrid y = RealGrid::Constant(4, 4, 1e200);
  const ComplexSpectrum k_hat = ComplexSpectrum::Ones(4, 4);
  try {
    train(k_hat, y, LearnerParams{});
    FAIL() << "expected NumericDivergence";
  } catch (const NumericDivergence& e) {
    EXPECT_FALSE(e.trace().empty());
  }
}

TEST(Train, RejectsBadParameters) {
  const RealGrid y = RealGrid::Ones(4, 4);
  const ComplexSpectrum k_hat = ComplexSpectrum::Ones(4, 4);
  for (auto mutate : std::vector<std::function<void(LearnerParams&)>>{
           [](LearnerParams& p) { p.lambda = 0; }, [](LearnerParams& p) { p.tau = -1; },
           [](LearnerParams& p) { p.max_iters = 0; }, [](LearnerParams& p) { p.rel_tol = 0; }}) {
    LearnerParams p;
    mutate(p);
    EXPECT_THROW(train(k_hat, y, p), InvalidInput);
  }
  EXPECT_THROW(train(ComplexSpectrum(ComplexSpectrum::Ones(4, 5)), y, LearnerParams{}), InvalidInput);
}
