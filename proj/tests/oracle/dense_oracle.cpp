#include "dense_oracle.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace oracle {

namespace {

void Guard(Index n, Index t_len) {
  if (n * t_len > kMaxDenseSize) {
    std::ostringstream os;
    os << "dense oracle refuses N*T = " << n * t_len << " > " << kMaxDenseSize;
    throw stqmle::Error(stqmle::ErrorCode::kGuardExceeded, os.str());
  }
}

}  // namespace

MatrixXd DenseW(const stqmle::SymSparseMatrix& w) {
  MatrixXd d = MatrixXd::Zero(w.dim(), w.dim());
  for (Index i = 0; i < w.dim(); ++i) {
    const auto cols = w.row_cols(i);
    const auto vals = w.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p) d(i, cols[p]) = vals[p];
  }
  return d;
}

DenseModelMatrices BuildDense(const MatrixXd& w, const stqmle::DependenceParams& theta,
                              Index t_len) {
  const Index n = w.rows();
  Guard(n, t_len);
  const MatrixXd id = MatrixXd::Identity(n, n);
  DenseModelMatrices m;
  m.S = id - theta.lambda * w;
  m.R = theta.rho * w + theta.gamma * id;
  m.A = m.R * m.S.inverse();
  m.K = (id - m.A * m.A).inverse();
  m.B = MatrixXd::Zero(n * t_len, n * t_len);
  m.Omega = MatrixXd::Identity(n * t_len, n * t_len);
  for (Index t = 0; t < t_len; ++t) {
    m.B.block(t * n, t * n, n, n) = m.S;
    if (t > 0) m.B.block(t * n, (t - 1) * n, n, n) = -m.R;
  }
  m.Omega.block(0, 0, n, n) = m.K;
  return m;
}

MatrixXd KSeries(const MatrixXd& a, double tol, int max_terms) {
  const MatrixXd a2 = a * a;
  MatrixXd term = MatrixXd::Identity(a.rows(), a.cols());
  MatrixXd sum = term;
  for (int j = 1; j < max_terms; ++j) {
    term = term * a2;
    sum += term;
    if (term.norm() < tol) break;
  }
  return sum;
}

VectorXd StackY(const stqmle::PanelData& data) {
  VectorXd y(data.N() * data.T());
  for (Index t = 0; t < data.T(); ++t) {
    for (Index i = 0; i < data.N(); ++i) y(t * data.N() + i) = data.y(t)[i];
  }
  return y;
}

MatrixXd StackX(const stqmle::PanelData& data) {
  MatrixXd x(data.N() * data.T(), data.k());
  for (Index t = 0; t < data.T(); ++t) {
    for (Index j = 0; j < data.k(); ++j) {
      for (Index i = 0; i < data.N(); ++i) x(t * data.N() + i, j) = data.x(t, j)[i];
    }
  }
  return x;
}

MatrixXd DensePrecision(const DenseModelMatrices& m) {
  return m.B.transpose() * m.Omega.inverse() * m.B;
}

double LogAbsDet(const MatrixXd& m) {
  const Eigen::PartialPivLU<MatrixXd> lu(m);
  const MatrixXd& u = lu.matrixLU();
  double s = 0.0;
  for (Index i = 0; i < u.rows(); ++i) s += std::log(std::abs(u(i, i)));
  return s;
}

double DenseLoglik(const stqmle::PanelData& data, const stqmle::ModelParams& params,
                   const MatrixXd& w) {
  const Index n = data.N(), t_len = data.T();
  const DenseModelMatrices m = BuildDense(w, params.theta, t_len);
  const VectorXd beta = Eigen::Map<const VectorXd>(params.beta.data(), data.k());
  const VectorXd e = StackY(data) - StackX(data) * beta;
  const double nt = static_cast<double>(n * t_len);
  const double quad = e.dot(DensePrecision(m) * e);
  return -0.5 * nt * std::log(2.0 * std::numbers::pi * params.sigma2) - 0.5 * LogAbsDet(m.K) +
         static_cast<double>(t_len) * LogAbsDet(m.S) - quad / (2.0 * params.sigma2);
}

double DenseMvnLogDensity(const stqmle::PanelData& data, const stqmle::ModelParams& params,
                          const MatrixXd& w) {
  const Index n = data.N(), t_len = data.T();
  const DenseModelMatrices m = BuildDense(w, params.theta, t_len);
  const MatrixXd binv = m.B.inverse();
  const MatrixXd cov = params.sigma2 * binv * m.Omega * binv.transpose();
  const Eigen::LLT<MatrixXd> llt(0.5 * (cov + cov.transpose()));
  const VectorXd beta = Eigen::Map<const VectorXd>(params.beta.data(), data.k());
  const VectorXd e = StackY(data) - StackX(data) * beta;
  const VectorXd z = llt.matrixL().solve(e);
  double logdet = 0.0;
  for (Index i = 0; i < cov.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
  return -0.5 * static_cast<double>(n * t_len) * std::log(2.0 * std::numbers::pi) -
         0.5 * logdet - 0.5 * z.squaredNorm();
}

VectorXd DenseGls(const stqmle::PanelData& data, const stqmle::DependenceParams& theta,
                  const MatrixXd& w) {
  const DenseModelMatrices m = BuildDense(w, theta, data.T());
  const MatrixXd p = DensePrecision(m);
  const MatrixXd x = StackX(data);
  const MatrixXd xpx = x.transpose() * p * x;
  const Eigen::JacobiSVD<MatrixXd> svd(xpx);
  const auto sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 1e12) {
    throw stqmle::Error(stqmle::ErrorCode::kSingularDesign, "dense GLS: singular design");
  }
  return xpx.ldlt().solve(x.transpose() * p * StackY(data));
}

MatrixXd DenseBetaCovariance(const stqmle::PanelData& data,
                             const stqmle::DependenceParams& theta, double sigma2,
                             const MatrixXd& w) {
  const DenseModelMatrices m = BuildDense(w, theta, data.T());
  const MatrixXd x = StackX(data);
  const MatrixXd xpx = x.transpose() * DensePrecision(m) * x;
  return sigma2 * xpx.inverse();
}

}  // namespace oracle
