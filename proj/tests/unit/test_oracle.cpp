#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dense_oracle.hpp"
#include "stqmle/likelihood.hpp"
#include "test_support.hpp"

using namespace stqmle;
using namespace testing_support;
using oracle::MatrixXd;
using oracle::VectorXd;

TEST(Oracle, StructuralInvariants) {
  std::mt19937_64 rng(1);
  for (Index side : {3, 5, 8}) {
    const SpatialWeights w = SpatialWeights::Build(RookGrid(side));
    const MatrixXd dw = oracle::DenseW(w.original());
    const Index n = side * side;
    for (int rep = 0; rep < 34; ++rep) {
      const DependenceParams th = RandomFeasibleTheta(w.d_min(), w.d_max(), rng);
      const auto m = oracle::BuildDense(dw, th, 2);
      EXPECT_LT((m.A - m.A.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT(m.A.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
      Eigen::SelfAdjointEigenSolver<MatrixXd> ek(m.K);
      EXPECT_GT(ek.eigenvalues().minCoeff(), 0.0);
      // S K^-1 S = S^2 - R^2.
      const MatrixXd lhs = m.S * m.K.inverse() * m.S;
      const MatrixXd rhs = m.S * m.S - m.R * m.R;
      EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10) << n;
      // log det K = log det S^2 - log det (S^2 - R^2).
      EXPECT_NEAR(oracle::LogAbsDet(m.K),
                  oracle::LogAbsDet(m.S * m.S) - oracle::LogAbsDet(rhs), 1e-8);
      EXPECT_LT((oracle::KSeries(m.A, 1e-13) - m.K).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Oracle, BlockStructure) {
  const SpatialWeights w = SpatialWeights::Build(RookGrid(3));
  const MatrixXd dw = oracle::DenseW(w.original());
  const DependenceParams th{0.05, 0.6, -0.04};
  const auto m = oracle::BuildDense(dw, th, 3);
  ASSERT_EQ(m.B.rows(), 27);
  // Diagonal blocks S, sub-diagonal blocks -R.
  EXPECT_LT((m.B.block(9, 9, 9, 9) - m.S).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((m.B.block(9, 0, 9, 9) + m.R).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(m.B.block(0, 9, 9, 9).cwiseAbs().maxCoeff(), 1e-15);
  // Omega = blockdiag(K, I, I).
  EXPECT_LT((m.Omega.block(0, 0, 9, 9) - m.K).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((m.Omega.block(9, 9, 18, 18) - MatrixXd::Identity(18, 18)).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(Oracle, LoglikZeroThetaIsIid) {
  const SymSparseMatrix g = RookGrid(3);
  const MatrixXd dw = oracle::DenseW(g);
  const PanelData d = RandomPanel(9, 3, 2, 3);
  const ModelParams p{{0.5, -0.5}, {0, 0, 0}, 2.0};
  const VectorXd e = oracle::StackY(d) - oracle::StackX(d) * Eigen::Vector2d(0.5, -0.5);
  const double want = -13.5 * std::log(2.0 * std::numbers::pi * 2.0) - e.squaredNorm() / 4.0;
  EXPECT_NEAR(oracle::DenseLoglik(d, p, dw), want, 1e-10);
  EXPECT_NEAR(oracle::DenseMvnLogDensity(d, p, dw), want, 1e-10);
}

TEST(Oracle, LoglikMatchesBandedOverManyThetas) {
  const SpatialWeights w = SpatialWeights::Build(RookGrid(3));
  const MatrixXd dw = oracle::DenseW(w.original());
  const PanelData d = RandomPanel(9, 3, 2, 4);
  const PanelData a = d.Permuted(w.permutation());
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    const ModelParams p{{0.1, 0.3}, RandomFeasibleTheta(w.d_min(), w.d_max(), rng), 0.7};
    const double dense = oracle::DenseLoglik(d, p, dw);
    EXPECT_NEAR(QuasiLoglik(a, p, w).loglik, dense, 1e-8 * std::abs(dense));
  }
}

TEST(Oracle, GlsReductions) {
  const MatrixXd dw = oracle::DenseW(RookGrid(3));
  const PanelData d = RandomPanel(9, 3, 2, 6);
  const VectorXd gls = oracle::DenseGls(d, {0, 0, 0}, dw);
  const MatrixXd x = oracle::StackX(d);
  const VectorXd ols = (x.transpose() * x).ldlt().solve(x.transpose() * oracle::StackY(d));
  EXPECT_LT((gls - ols).cwiseAbs().maxCoeff(), 1e-12);

  const PanelData one = RandomPanel(9, 3, 1, 7);
  const DependenceParams th{0.05, 0.5, 0.02};
  const auto m = oracle::BuildDense(dw, th, 3);
  const MatrixXd prec = oracle::DensePrecision(m);
  const VectorXd ones = VectorXd::Ones(27);
  const double weighted = ones.dot(prec * oracle::StackY(one)) / ones.dot(prec * ones);
  EXPECT_NEAR(oracle::DenseGls(one, th, dw)(0), weighted, 1e-12);
}

TEST(Oracle, GuardAndSingularDesign) {
  const MatrixXd dw = oracle::DenseW(RookGrid(10));
  try {
    oracle::BuildDense(dw, {0, 0, 0}, 21);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGuardExceeded);
  }
  EXPECT_NO_THROW(oracle::BuildDense(dw, {0, 0, 0}, 20));
  PanelData d = RandomPanel(9, 2, 2, 8);
  for (Index t = 0; t < 2; ++t) {
    for (Index i = 0; i < 9; ++i) d.x(t, 1)[i] = d.x(t, 0)[i];
  }
  try {
    oracle::DenseGls(d, {0, 0, 0}, oracle::DenseW(RookGrid(3)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularDesign);
  }
}
