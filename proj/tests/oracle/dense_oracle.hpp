#pragma once

#include <Eigen/Dense>

#include "stqmle/model.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using stqmle::Index;

// Refuses problems with N * T above this.
inline constexpr Index kMaxDenseSize = 2000;

struct DenseModelMatrices {
  MatrixXd S, R, A, K, B, Omega;
};

MatrixXd DenseW(const stqmle::SymSparseMatrix& w);

// S, R, A = R S^-1, K = (I - A^2)^-1 by dense inverse, and the NT x NT B and
// Omega. Throws kGuardExceeded when N * T > kMaxDenseSize.
DenseModelMatrices BuildDense(const MatrixXd& w, const stqmle::DependenceParams& theta,
                              Index t_len);

// K as the truncated series sum_j A^(2j); stops once the term norm is below
// tol.
MatrixXd KSeries(const MatrixXd& a, double tol = 1e-14, int max_terms = 100000);

// Stacked Y and X (NT and NT x k), time-major.
VectorXd StackY(const stqmle::PanelData& data);
MatrixXd StackX(const stqmle::PanelData& data);

// Sigma^-1 = B' Omega^-1 B.
MatrixXd DensePrecision(const DenseModelMatrices& m);

// Gaussian quasi log-likelihood assembled from B and Omega.
double DenseLoglik(const stqmle::PanelData& data, const stqmle::ModelParams& params,
                   const MatrixXd& w);

// Multivariate normal log-density of Y - X beta with covariance
// sigma2 B^-1 Omega B'^-1, by dense Cholesky of the covariance.
double DenseMvnLogDensity(const stqmle::PanelData& data, const stqmle::ModelParams& params,
                          const MatrixXd& w);

// (X' Sigma^-1 X)^-1 X' Sigma^-1 Y.
VectorXd DenseGls(const stqmle::PanelData& data, const stqmle::DependenceParams& theta,
                  const MatrixXd& w);

// sigma2 (X' Sigma^-1 X)^-1.
MatrixXd DenseBetaCovariance(const stqmle::PanelData& data,
                             const stqmle::DependenceParams& theta, double sigma2,
                             const MatrixXd& w);

// log|det M| via LU.
double LogAbsDet(const MatrixXd& m);

}  // namespace oracle
