#include "stqmle/likelihood.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace stqmle {

namespace {

[[noreturn]] void ThrowInfeasible(const DependenceParams& theta, const FeasibilityVerdict& v) {
  std::ostringstream os;
  os.precision(17);
  os << "theta (lambda, gamma, rho) = (" << theta.lambda << ", " << theta.gamma << ", "
     << theta.rho << ") is outside the feasible region:";
  for (const auto& label : v.violated) os << " [" << label << "]";
  throw Error(ErrorCode::kInfeasibleTheta, os.str());
}

void RequireFeasible(const SpatialWeights& w, const DependenceParams& theta) {
  const FeasibilityVerdict v = FeasibilityCheck(w, theta);
  if (!v) ThrowInfeasible(theta, v);
}

// Deterministic pairwise reduction.
double PairwiseSum(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return PairwiseSum(v, h) + PairwiseSum(v + h, n - h);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void Residual(const PanelData& data, std::span<const double> beta, Index t,
              std::span<double> out) {
  const auto y = data.y(t);
  std::copy(y.begin(), y.end(), out.begin());
  for (Index j = 0; j < data.k(); ++j) {
    const auto x = data.x(t, j);
    const double b = beta[static_cast<std::size_t>(j)];
    for (Index i = 0; i < data.N(); ++i) out[i] -= b * x[i];
  }
}

// c0 I + c1 W + c2 W^2.
BandedSymMatrix Polynomial(double c0, double c1, double c2, const BandedSymMatrix& w,
                           const BandedSymMatrix& w2) {
  return BandAxpby(1.0, BandShiftScale(c0, c1, w), c2, w2);
}

struct Coefficients {
  std::array<double, 3> s2, r2, rs, g;
};

Coefficients PolyCoefficients(const DependenceParams& th) {
  const double l = th.lambda, gm = th.gamma, r = th.rho;
  Coefficients c;
  c.s2 = {1.0, -2.0 * l, l * l};
  c.r2 = {gm * gm, 2.0 * gm * r, r * r};
  c.rs = {gm, r - gm * l, -l * r};
  for (int j = 0; j < 3; ++j) c.g[j] = c.s2[j] - c.r2[j];
  return c;
}

double LogDetShiftedDirect(const BandedSymMatrix& w, double c) {
  if (c == 0.0) return 0.0;
  return BandedCholesky(BandShiftScale(1.0, -c, w)).log_det();
}

}  // namespace

BandedSymMatrix SquareWeights(const SpatialWeights& w) {
  const SymSparseMatrix& a = w.sparse();
  const Index n = a.dim();
  BandedSymMatrix out(n, 2 * w.banded().bandwidth());
  for (Index i = 0; i < n; ++i) {
    const auto ci = a.row_cols(i);
    const auto vi = a.row_values(i);
    for (std::size_t p = 0; p < ci.size(); ++p) {
      const Index k = ci[p];
      const auto ck = a.row_cols(k);
      const auto vk = a.row_values(k);
      for (std::size_t q = 0; q < ck.size(); ++q) {
        const Index j = ck[q];
        if (j <= i) out.lower(i, j) += vi[p] * vk[q];
      }
    }
  }
  return out.Tightened();
}

LikelihoodWorkspace::LikelihoodWorkspace(const SpatialWeights& w, LogDetRoute route)
    : w_(&w), route_(route), w2_(SquareWeights(w)) {}

void LikelihoodWorkspace::Update(const DependenceParams& theta) {
  if (version_ > 0 && theta.lambda == theta_.lambda && theta.gamma == theta_.gamma &&
      theta.rho == theta_.rho) {
    return;
  }
  RequireFeasible(*w_, theta);
  const BandedSymMatrix& w = w_->banded();
  const Coefficients c = PolyCoefficients(theta);
  s2_ = Polynomial(c.s2[0], c.s2[1], c.s2[2], w, w2_);
  r2_ = Polynomial(c.r2[0], c.r2[1], c.r2[2], w, w2_);
  rs_ = Polynomial(c.rs[0], c.rs[1], c.rs[2], w, w2_);
  g_ = Polynomial(c.g[0], c.g[1], c.g[2], w, w2_);
  if (route_ == LogDetRoute::kSquared) {
    logdet_s2_ = BandedCholesky(s2_).log_det();
    logdet_g_ = BandedCholesky(g_).log_det();
  } else {
    const double n = static_cast<double>(w_->N());
    const double c1 = (theta.lambda + theta.rho) / (1.0 - theta.gamma);
    const double c2 = (theta.lambda - theta.rho) / (1.0 + theta.gamma);
    logdet_s2_ = 2.0 * LogDetShiftedDirect(w, theta.lambda);
    logdet_g_ = n * (std::log1p(-theta.gamma) + std::log1p(theta.gamma)) +
                LogDetShiftedDirect(w, c1) + LogDetShiftedDirect(w, c2);
  }
  theta_ = theta;
  ++version_;
}

double LogDetK(const LikelihoodWorkspace& ws) { return ws.logdet_S2() - ws.logdet_G(); }

double QuadForm(const PanelData& data, std::span<const double> beta,
                const LikelihoodWorkspace& ws) {
  CheckAligned(data, ws.weights());
  if (static_cast<Index>(beta.size()) != data.k()) {
    throw Error(ErrorCode::kDimensionMismatch, "QuadForm: beta length differs from k");
  }
  const Index n = data.N(), tl = data.T();
  std::vector<double> cur(static_cast<std::size_t>(n)), next(static_cast<std::size_t>(n));
  std::vector<double> parts(static_cast<std::size_t>(tl));
  Residual(data, beta, 0, cur);
  for (Index t = 0; t < tl; ++t) {
    double s = t == 0 ? BandBilinear(ws.G(), cur, cur) : BandBilinear(ws.S2(), cur, cur);
    if (t + 1 < tl) {
      Residual(data, beta, t + 1, next);
      s += BandBilinear(ws.R2(), cur, cur) - 2.0 * BandBilinear(ws.RS(), cur, next);
      cur.swap(next);
    }
    parts[static_cast<std::size_t>(t)] = s;
  }
  return PairwiseSum(parts.data(), parts.size());
}

void ApplyPrecision(const LikelihoodWorkspace& ws, Index t_len, std::span<const double> e,
                    std::span<double> out) {
  const Index n = ws.weights().N();
  if (static_cast<Index>(e.size()) != n * t_len || out.size() != e.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "ApplyPrecision: vector length is not NT");
  }
  std::vector<double> tmp(static_cast<std::size_t>(n));
  auto slice = [n](auto v, Index t) {
    return v.subspan(static_cast<std::size_t>(t * n), static_cast<std::size_t>(n));
  };
  for (Index t = 0; t < t_len; ++t) {
    auto o = slice(out, t);
    const auto et = slice(e, t);
    if (t_len == 1) {
      BandSpmv(ws.G(), et, o);
      continue;
    }
    BandSpmv(t == 0 ? ws.G() : ws.S2(), et, o);
    if (t + 1 < t_len) {
      BandSpmv(ws.R2(), et, tmp);
      for (Index i = 0; i < n; ++i) o[i] += tmp[i];
      BandSpmv(ws.RS(), slice(e, t + 1), tmp);
      for (Index i = 0; i < n; ++i) o[i] -= tmp[i];
    }
    if (t > 0) {
      BandSpmv(ws.RS(), slice(e, t - 1), tmp);
      for (Index i = 0; i < n; ++i) o[i] -= tmp[i];
    }
  }
}

SmallMatrix PrecisionGram(const PanelData& data, const LikelihoodWorkspace& ws) {
  CheckAligned(data, ws.weights());
  const Index n = data.N(), tl = data.T(), m = data.k() + 1;
  auto column = [&data](Index t, Index a) { return a == 0 ? data.y(t) : data.x(t, a - 1); };
  // parts[(a * m + b) * T + t]
  std::vector<double> parts(static_cast<std::size_t>(m * m * tl), 0.0);
  std::vector<std::vector<double>> p(static_cast<std::size_t>(m),
                                     std::vector<double>(static_cast<std::size_t>(n)));
  std::vector<std::vector<double>> c = p;
  std::vector<double> tmp(static_cast<std::size_t>(n));
  for (Index t = 0; t < tl; ++t) {
    const bool has_next = t + 1 < tl;
    for (Index a = 0; a < m; ++a) {
      auto& pa = p[static_cast<std::size_t>(a)];
      BandSpmv(t == 0 ? ws.G() : ws.S2(), column(t, a), pa);
      if (has_next) {
        BandSpmv(ws.R2(), column(t, a), tmp);
        for (Index i = 0; i < n; ++i) pa[i] += tmp[i];
        BandSpmv(ws.RS(), column(t + 1, a), c[static_cast<std::size_t>(a)]);
      }
    }
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) {
        double s = Dot(column(t, a), p[static_cast<std::size_t>(b)]);
        if (has_next) {
          s -= Dot(column(t, a), c[static_cast<std::size_t>(b)]) +
               Dot(c[static_cast<std::size_t>(a)], column(t, b));
        }
        parts[static_cast<std::size_t>((a * m + b) * tl + t)] = s;
      }
    }
  }
  SmallMatrix gram(m);
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) {
      gram(a, b) = PairwiseSum(parts.data() + (a * m + b) * tl, static_cast<std::size_t>(tl));
    }
  }
  // Exact symmetry; the two triangles differ only by rounding.
  for (Index a = 0; a < m; ++a) {
    for (Index b = a + 1; b < m; ++b) {
      const double v = 0.5 * (gram(a, b) + gram(b, a));
      gram(a, b) = gram(b, a) = v;
    }
  }
  return gram;
}

namespace {

LikelihoodValue Assemble(double nt, Index t_len, double sigma2, double quad, double logdet_s2,
                         double logdet_g) {
  LikelihoodValue v;
  v.quad_form = quad;
  v.sigma2_hat = quad / nt;
  v.logdet_K = logdet_s2 - logdet_g;
  v.logdet_S_abs = 0.5 * logdet_s2;
  v.loglik = -0.5 * nt * std::log(2.0 * std::numbers::pi * sigma2) - 0.5 * v.logdet_K +
             static_cast<double>(t_len) * v.logdet_S_abs - quad / (2.0 * sigma2);
  if (!std::isfinite(v.loglik)) {
    std::ostringstream os;
    os << "non-finite log-likelihood (quad form " << quad << ", log det S^2 " << logdet_s2
       << ", log det G " << logdet_g << ", sigma2 " << sigma2 << ")";
    throw Error(ErrorCode::kNonfiniteValue, os.str());
  }
  return v;
}

ConcentratedValue Concentrate(double nt, Index t_len, const GlsSolution& gls, double logdet_s2,
                              double logdet_g) {
  if (!(gls.quad_form > 0.0)) {
    throw Error(ErrorCode::kNonfiniteValue,
                "residual quadratic form is not positive; sigma2 cannot be profiled");
  }
  const double sigma2 = gls.quad_form / nt;
  const LikelihoodValue lv = Assemble(nt, t_len, sigma2, gls.quad_form, logdet_s2, logdet_g);
  ConcentratedValue cv;
  cv.loglik = lv.loglik;
  cv.beta_hat = gls.beta;
  cv.sigma2_hat = sigma2;
  cv.quad_form = gls.quad_form;
  cv.logdet_K = lv.logdet_K;
  cv.logdet_S_abs = lv.logdet_S_abs;
  return cv;
}

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;

Mat DesignBlock(const SmallMatrix& gram) {
  const Index k = gram.n - 1;
  Mat q(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) q(i, j) = gram(i + 1, j + 1);
  }
  return q;
}

void CheckConditioning(const Mat& q) {
  Eigen::SelfAdjointEigenSolver<Mat> es(q, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    std::ostringstream os;
    os << "X' Sigma^-1 X is singular or ill-conditioned (eigenvalues in [" << lo << ", " << hi
       << "])";
    throw Error(ErrorCode::kSingularDesign, os.str());
  }
}

}  // namespace

GlsSolution SolveGls(const SmallMatrix& gram) {
  const Index k = gram.n - 1;
  GlsSolution out;
  if (k == 0) {
    out.quad_form = gram(0, 0);
    return out;
  }
  const Mat q = DesignBlock(gram);
  CheckConditioning(q);
  Eigen::VectorXd rhs(k);
  for (Index i = 0; i < k; ++i) rhs(i) = gram(i + 1, 0);
  const Eigen::VectorXd beta = q.ldlt().solve(rhs);
  out.beta.assign(beta.data(), beta.data() + k);
  out.quad_form = gram(0, 0) - 2.0 * beta.dot(rhs) + beta.dot(q * beta);
  return out;
}

SmallMatrix InvertDesignBlock(const SmallMatrix& gram) {
  const Index k = gram.n - 1;
  const Mat q = DesignBlock(gram);
  CheckConditioning(q);
  const Mat inv = q.ldlt().solve(Mat::Identity(k, k));
  SmallMatrix out(k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) out(i, j) = 0.5 * (inv(i, j) + inv(j, i));
  }
  return out;
}

LikelihoodValue QuasiLoglik(const PanelData& data, const ModelParams& params,
                            LikelihoodWorkspace& ws) {
  if (!(params.sigma2 > 0.0) || !std::isfinite(params.sigma2)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma2 must be positive and finite");
  }
  ws.Update(params.theta);
  const double quad = QuadForm(data, params.beta, ws);
  LikelihoodValue v = Assemble(static_cast<double>(data.N() * data.T()), data.T(),
                               params.sigma2, quad, ws.logdet_S2(), ws.logdet_G());
  return v;
}

LikelihoodValue QuasiLoglik(const PanelData& data, const ModelParams& params,
                            const SpatialWeights& w) {
  LikelihoodWorkspace ws(w);
  return QuasiLoglik(data, params, ws);
}

std::vector<double> GradientBeta(const PanelData& data, const ModelParams& params,
                                 const LikelihoodWorkspace& ws) {
  CheckAligned(data, ws.weights());
  const Index n = data.N(), tl = data.T(), k = data.k();
  if (static_cast<Index>(params.beta.size()) != k) {
    throw Error(ErrorCode::kDimensionMismatch, "GradientBeta: beta length differs from k");
  }
  std::vector<double> e(static_cast<std::size_t>(n * tl)), pe(e.size());
  for (Index t = 0; t < tl; ++t) {
    Residual(data, params.beta, t,
             std::span<double>(e).subspan(static_cast<std::size_t>(t * n),
                                          static_cast<std::size_t>(n)));
  }
  ApplyPrecision(ws, tl, e, pe);
  std::vector<double> grad(static_cast<std::size_t>(k));
  std::vector<double> parts(static_cast<std::size_t>(tl));
  for (Index j = 0; j < k; ++j) {
    for (Index t = 0; t < tl; ++t) {
      parts[static_cast<std::size_t>(t)] =
          Dot(data.x(t, j), std::span<const double>(pe).subspan(
                                static_cast<std::size_t>(t * n), static_cast<std::size_t>(n)));
    }
    grad[static_cast<std::size_t>(j)] = PairwiseSum(parts.data(), parts.size()) / params.sigma2;
  }
  return grad;
}

ConcentratedValue ConcentratedLoglik(const PanelData& data, const DependenceParams& theta,
                                     LikelihoodWorkspace& ws) {
  ws.Update(theta);
  const GlsSolution gls = SolveGls(PrecisionGram(data, ws));
  return Concentrate(static_cast<double>(data.N() * data.T()), data.T(), gls, ws.logdet_S2(),
                     ws.logdet_G());
}

ConcentratedValue ConcentratedLoglik(const PanelData& data, const DependenceParams& theta,
                                     const SpatialWeights& w) {
  LikelihoodWorkspace ws(w);
  return ConcentratedLoglik(data, theta, ws);
}

ConcentratedObjective::ConcentratedObjective(const PanelData& data, const SpatialWeights& w)
    : w_(&w), n_(data.N()), t_(data.T()), k_(data.k()) {
  CheckAligned(data, w);
  const Index m = k_ + 1;
  const std::size_t nn = static_cast<std::size_t>(n_);
  auto column = [&data](Index t, Index a) { return a == 0 ? data.y(t) : data.x(t, a - 1); };

  // Per-slice moments, reduced pairwise over t afterwards.
  // within[j][(a * m + b) * T + t], cross[j][(a * m + b) * T + t].
  std::array<std::vector<double>, 3> within, cross;
  for (int j = 0; j < 3; ++j) {
    within[j].assign(static_cast<std::size_t>(m * m * t_), 0.0);
    cross[j].assign(static_cast<std::size_t>(m * m * t_), 0.0);
  }
  std::vector<std::vector<double>> wz_cur(static_cast<std::size_t>(m), std::vector<double>(nn));
  std::vector<std::vector<double>> wz_next = wz_cur;
  const SymSparseMatrix& ws = w.sparse();
  for (Index a = 0; a < m; ++a) ws.Multiply(column(0, a), wz_cur[static_cast<std::size_t>(a)]);
  for (Index t = 0; t < t_; ++t) {
    const bool has_next = t + 1 < t_;
    if (has_next) {
      for (Index a = 0; a < m; ++a) {
        ws.Multiply(column(t + 1, a), wz_next[static_cast<std::size_t>(a)]);
      }
    }
    for (Index a = 0; a < m; ++a) {
      const auto& wa = wz_cur[static_cast<std::size_t>(a)];
      for (Index b = 0; b < m; ++b) {
        const std::size_t idx = static_cast<std::size_t>((a * m + b) * t_ + t);
        const auto& wb = wz_cur[static_cast<std::size_t>(b)];
        within[0][idx] = Dot(column(t, a), column(t, b));
        within[1][idx] = Dot(column(t, a), wb);
        within[2][idx] = Dot(wa, wb);
        if (has_next) {
          const auto& wbn = wz_next[static_cast<std::size_t>(b)];
          cross[0][idx] = Dot(column(t, a), column(t + 1, b));
          cross[1][idx] = Dot(column(t, a), wbn);
          cross[2][idx] = Dot(wa, wbn);
        }
      }
    }
    wz_cur.swap(wz_next);
  }
  for (int j = 0; j < 3; ++j) {
    for (auto& block : m_) block[j] = SmallMatrix(m);
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) {
        const double* wv = within[j].data() + (a * m + b) * t_;
        const double* cv = cross[j].data() + (a * m + b) * t_;
        const std::size_t tl = static_cast<std::size_t>(t_);
        m_[0][j](a, b) = wv[0];
        m_[1][j](a, b) = PairwiseSum(wv + 1, tl - 1);
        m_[2][j](a, b) = PairwiseSum(wv, tl - 1);
        m_[3][j](a, b) = PairwiseSum(cv, tl - 1);
      }
    }
  }
}

SmallMatrix ConcentratedObjective::Gram(const DependenceParams& theta) const {
  const Coefficients c = PolyCoefficients(theta);
  const Index m = k_ + 1;
  SmallMatrix q(m);
  for (int j = 0; j < 3; ++j) {
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) {
        q(a, b) += c.g[j] * m_[0][j](a, b) + c.s2[j] * m_[1][j](a, b) +
                   c.r2[j] * m_[2][j](a, b) - c.rs[j] * (m_[3][j](a, b) + m_[3][j](b, a));
      }
    }
  }
  for (Index a = 0; a < m; ++a) {
    for (Index b = a + 1; b < m; ++b) {
      const double v = 0.5 * (q(a, b) + q(b, a));
      q(a, b) = q(b, a) = v;
    }
  }
  return q;
}

double ConcentratedObjective::LogDetShifted(double c) {
  if (auto it = logdet_cache_.find(c); it != logdet_cache_.end()) return it->second;
  const double v = LogDetShiftedDirect(w_->banded(), c);
  if (logdet_cache_.size() >= 64) logdet_cache_.clear();
  logdet_cache_.emplace(c, v);
  return v;
}

void ConcentratedObjective::LogDets(const DependenceParams& theta, double* logdet_s2,
                                    double* logdet_g) {
  const double n = static_cast<double>(n_);
  const double c1 = (theta.lambda + theta.rho) / (1.0 - theta.gamma);
  const double c2 = (theta.lambda - theta.rho) / (1.0 + theta.gamma);
  *logdet_s2 = 2.0 * LogDetShifted(theta.lambda);
  *logdet_g = n * (std::log1p(-theta.gamma) + std::log1p(theta.gamma)) + LogDetShifted(c1) +
              LogDetShifted(c2);
}

ConcentratedValue ConcentratedObjective::Evaluate(const DependenceParams& theta) {
  RequireFeasible(*w_, theta);
  ++evaluations_;
  double ls2 = 0.0, lg = 0.0;
  LogDets(theta, &ls2, &lg);
  const GlsSolution gls = SolveGls(Gram(theta));
  return Concentrate(static_cast<double>(NT()), t_, gls, ls2, lg);
}

LikelihoodValue ConcentratedObjective::EvaluateAtBeta(const DependenceParams& theta,
                                                      std::span<const double> beta) {
  if (static_cast<Index>(beta.size()) != k_) {
    throw Error(ErrorCode::kDimensionMismatch, "EvaluateAtBeta: beta length differs from k");
  }
  RequireFeasible(*w_, theta);
  ++evaluations_;
  double ls2 = 0.0, lg = 0.0;
  LogDets(theta, &ls2, &lg);
  const SmallMatrix q = Gram(theta);
  const Index m = k_ + 1;
  std::vector<double> v(static_cast<std::size_t>(m));
  v[0] = 1.0;
  for (Index j = 0; j < k_; ++j) v[static_cast<std::size_t>(j + 1)] = -beta[static_cast<std::size_t>(j)];
  double h = 0.0;
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) h += v[a] * q(a, b) * v[b];
  }
  if (!(h > 0.0)) {
    throw Error(ErrorCode::kNonfiniteValue,
                "residual quadratic form is not positive; sigma2 cannot be profiled");
  }
  const double nt = static_cast<double>(NT());
  return Assemble(nt, t_, h / nt, h, ls2, lg);
}

std::array<double, 3> ConcentratedObjective::GradientFd(const DependenceParams& theta) {
  RequireFeasible(*w_, theta);
  const double base_step = std::cbrt(std::numeric_limits<double>::epsilon());
  std::array<double, 3> grad{};
  const auto t0 = theta.AsArray();
  for (int i = 0; i < 3; ++i) {
    double h = base_step * (1.0 + std::abs(t0[i]));
    auto plus = t0, minus = t0;
    bool ok = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      plus[i] = t0[i] + h;
      minus[i] = t0[i] - h;
      if (FeasibilityCheck(*w_, DependenceParams::FromArray(plus)) &&
          FeasibilityCheck(*w_, DependenceParams::FromArray(minus))) {
        ok = true;
        break;
      }
      h *= 0.5;
    }
    if (!ok) {
      std::ostringstream os;
      os << "no feasible finite-difference step for coordinate " << i
         << " (theta too close to the boundary)";
      throw Error(ErrorCode::kInfeasibleTheta, os.str());
    }
    // Use the step actually represented in floating point.
    const double f_plus = Evaluate(DependenceParams::FromArray(plus)).loglik;
    const double f_minus = Evaluate(DependenceParams::FromArray(minus)).loglik;
    grad[i] = (f_plus - f_minus) / (plus[i] - minus[i]);
  }
  return grad;
}

std::array<double, 3> GradientThetaFd(const PanelData& data, const DependenceParams& theta,
                                      const SpatialWeights& w) {
  ConcentratedObjective obj(data, w);
  return obj.GradientFd(theta);
}

}  // namespace stqmle
