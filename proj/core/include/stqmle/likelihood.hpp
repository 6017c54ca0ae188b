#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "stqmle/model.hpp"
#include "stqmle/sparse/banded.hpp"
#include "stqmle/sparse/cholesky.hpp"

namespace stqmle {

// How log det K and log|det S| are obtained.
//   kFactored: S = I - lambda W and the two factors of
//              G = [(1 - gamma) I - (lambda + rho) W] [(1 + gamma) I - (lambda - rho) W]
//              are each factored at the bandwidth of W.
//   kSquared:  S^2 and G are factored directly at twice that bandwidth.
enum class LogDetRoute { kFactored, kSquared };

// k x k (or (k+1) x (k+1)) symmetric matrix, row-major.
struct SmallMatrix {
  Index n = 0;
  std::vector<double> a;

  SmallMatrix() = default;
  explicit SmallMatrix(Index dim) : n(dim), a(static_cast<std::size_t>(dim * dim), 0.0) {}
  double& operator()(Index i, Index j) { return a[static_cast<std::size_t>(i * n + j)]; }
  double operator()(Index i, Index j) const { return a[static_cast<std::size_t>(i * n + j)]; }
};

// Banded blocks of the precision of the stacked errors at one theta:
// G = S^2 - R^2, S^2, R^2 and RS, plus the log-determinants.
class LikelihoodWorkspace {
 public:
  explicit LikelihoodWorkspace(const SpatialWeights& w,
                               LogDetRoute route = LogDetRoute::kFactored);

  // Rebuilds everything for theta. Throws kInfeasibleTheta outside the
  // polytope; a no-op when theta is unchanged.
  void Update(const DependenceParams& theta);

  const SpatialWeights& weights() const noexcept { return *w_; }
  const DependenceParams& theta() const noexcept { return theta_; }
  // Incremented on every rebuild; 0 before the first Update.
  std::uint64_t version() const noexcept { return version_; }
  bool ready() const noexcept { return version_ > 0; }

  const BandedSymMatrix& G() const { return g_; }
  const BandedSymMatrix& S2() const { return s2_; }
  const BandedSymMatrix& R2() const { return r2_; }
  const BandedSymMatrix& RS() const { return rs_; }

  double logdet_S2() const noexcept { return logdet_s2_; }
  double logdet_G() const noexcept { return logdet_g_; }
  LogDetRoute route() const noexcept { return route_; }

 private:
  const SpatialWeights* w_;
  LogDetRoute route_;
  BandedSymMatrix w2_;
  DependenceParams theta_{};
  std::uint64_t version_ = 0;
  BandedSymMatrix g_, s2_, r2_, rs_;
  double logdet_s2_ = 0.0;
  double logdet_g_ = 0.0;
};

struct LikelihoodValue {
  double loglik = 0.0;
  double sigma2_hat = 0.0;  // quad_form / NT
  double quad_form = 0.0;   // H(beta, theta)
  double logdet_K = 0.0;
  double logdet_S_abs = 0.0;
};

struct ConcentratedValue {
  double loglik = 0.0;
  std::vector<double> beta_hat;
  double sigma2_hat = 0.0;
  double quad_form = 0.0;
  double logdet_K = 0.0;
  double logdet_S_abs = 0.0;
};

// W^2 as a banded matrix, computed from the sparse pattern of W.
BandedSymMatrix SquareWeights(const SpatialWeights& w);

// (Y - X beta)' Sigma^{-1} (Y - X beta), streamed over pairs of time slices.
double QuadForm(const PanelData& data, std::span<const double> beta,
                const LikelihoodWorkspace& ws);

double LogDetK(const LikelihoodWorkspace& ws);

// out = Sigma^{-1} e for a stacked NT vector.
void ApplyPrecision(const LikelihoodWorkspace& ws, Index t_len,
                    std::span<const double> e, std::span<double> out);

// Z' Sigma^{-1} Z with Z = [Y, X], assembled slice by slice from the banded
// blocks.
SmallMatrix PrecisionGram(const PanelData& data, const LikelihoodWorkspace& ws);

LikelihoodValue QuasiLoglik(const PanelData& data, const ModelParams& params,
                            LikelihoodWorkspace& ws);
LikelihoodValue QuasiLoglik(const PanelData& data, const ModelParams& params,
                            const SpatialWeights& w);

// d loglik / d beta = X' Sigma^{-1} (Y - X beta) / sigma2.
std::vector<double> GradientBeta(const PanelData& data, const ModelParams& params,
                                 const LikelihoodWorkspace& ws);

// beta and sigma2 profiled out by GLS. Throws kSingularDesign when the
// condition number of X' Sigma^{-1} X exceeds 1e12.
ConcentratedValue ConcentratedLoglik(const PanelData& data, const DependenceParams& theta,
                                     LikelihoodWorkspace& ws);
ConcentratedValue ConcentratedLoglik(const PanelData& data, const DependenceParams& theta,
                                     const SpatialWeights& w);

// Solves the GLS normal equations in a (k+1) x (k+1) Gram of [Y, X]; returns
// beta_hat and the residual quadratic form.
struct GlsSolution {
  std::vector<double> beta;
  double quad_form = 0.0;
};
GlsSolution SolveGls(const SmallMatrix& gram);

// Inverse of the X block of a Gram of [Y, X], with the same conditioning
// check as SolveGls.
SmallMatrix InvertDesignBlock(const SmallMatrix& gram);

// Fast concentrated objective. Cross-moments Z_t' W^j Z_s (j = 0, 1, 2) are
// accumulated once, after which each theta costs three banded Cholesky
// factorizations at the bandwidth of W plus O(k^2).
class ConcentratedObjective {
 public:
  ConcentratedObjective(const PanelData& data, const SpatialWeights& w);

  // Throws kInfeasibleTheta outside the polytope (with margin).
  ConcentratedValue Evaluate(const DependenceParams& theta);

  // Profiled over sigma2 only, at a fixed beta.
  LikelihoodValue EvaluateAtBeta(const DependenceParams& theta, std::span<const double> beta);

  // Z' Sigma^{-1}(theta) Z, with Z = [Y, X].
  SmallMatrix Gram(const DependenceParams& theta) const;

  // log det(I - c W), memoised.
  double LogDetShifted(double c);

  // Central differences of Evaluate(.).loglik with h_i = cbrt(eps)(1 + |theta_i|),
  // halved until both stencil points are feasible.
  std::array<double, 3> GradientFd(const DependenceParams& theta);

  const SpatialWeights& weights() const noexcept { return *w_; }
  Index NT() const noexcept { return n_ * t_; }
  Index k() const noexcept { return k_; }
  std::int64_t evaluations() const noexcept { return evaluations_; }

 private:
  void LogDets(const DependenceParams& theta, double* logdet_s2, double* logdet_g);

  const SpatialWeights* w_;
  Index n_, t_, k_;
  // m_[block][j]: block 0 = first slice, 1 = slices 2..T, 2 = slices 1..T-1,
  // 3 = cross Z_t' W^j Z_{t+1}.
  std::array<std::array<SmallMatrix, 3>, 4> m_;
  std::map<double, double> logdet_cache_;
  std::int64_t evaluations_ = 0;
};

std::array<double, 3> GradientThetaFd(const PanelData& data, const DependenceParams& theta,
                                      const SpatialWeights& w);

}  // namespace stqmle
