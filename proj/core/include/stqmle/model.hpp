#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "stqmle/sparse/banded.hpp"
#include "stqmle/sparse/lanczos.hpp"
#include "stqmle/sparse/permutation.hpp"
#include "stqmle/sparse/sym_sparse_matrix.hpp"

namespace stqmle {

// Spatio-temporal dependence: contemporaneous spatial lag (lambda), temporal
// lag (gamma) and space-time diffusion (rho).
struct DependenceParams {
  double lambda = 0.0;
  double gamma = 0.0;
  double rho = 0.0;

  std::array<double, 3> AsArray() const { return {lambda, gamma, rho}; }
  static DependenceParams FromArray(const std::array<double, 3>& a) {
    return {a[0], a[1], a[2]};
  }
};

struct ModelParams {
  std::vector<double> beta;
  DependenceParams theta;
  double sigma2 = 1.0;
};

// Shrinks the open feasibility polytope to a closed set.
inline constexpr double kFeasibilityMargin = 1e-6;

// Persistable summary of a preprocessed weight matrix.
struct WeightsCache {
  Index n = 0;
  Index bandwidth = 0;
  double d_min = 0.0;
  double d_max = 0.0;
  std::vector<Index> permutation;
  std::string checksum;
};

// FNV-1a over the CSR arrays of W (input ordering), as 16 hex digits.
std::string Checksum(const SymSparseMatrix& w);

struct WeightsOptions {
  LanczosOptions lanczos;
  bool reorder = true;  // apply RCM; identity ordering otherwise
};

// Spatial weight matrix W after RCM reordering, with cached extreme
// eigenvalues. Immutable once built.
class SpatialWeights {
 public:
  // Requires a symmetric, zero-diagonal W.
  static SpatialWeights Build(SymSparseMatrix w, const WeightsOptions& options = {});

  // Reuses a cache written for the same W; throws kInvalidArgument when the
  // checksum or dimension does not match.
  static SpatialWeights FromCache(SymSparseMatrix w, const WeightsCache& cache);

  Index N() const noexcept { return original_.dim(); }
  const SymSparseMatrix& original() const noexcept { return original_; }
  const SymSparseMatrix& sparse() const noexcept { return sparse_; }
  const BandedSymMatrix& banded() const noexcept { return banded_; }
  const Permutation& permutation() const noexcept { return permutation_; }
  double d_min() const noexcept { return d_min_; }
  double d_max() const noexcept { return d_max_; }
  const ExtremeEigenResult& spectrum() const noexcept { return spectrum_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  WeightsCache cache() const;

 private:
  SpatialWeights() = default;
  void Finish();

  SymSparseMatrix original_;
  SymSparseMatrix sparse_;
  BandedSymMatrix banded_;
  Permutation permutation_;
  double d_min_ = 0.0;
  double d_max_ = 0.0;
  ExtremeEigenResult spectrum_;
  std::vector<std::string> warnings_;
};

// Responses Y (N x T) and design X (N x k x T), stored slice by slice so each
// Y_t and each column of X_t is contiguous.
class PanelData {
 public:
  PanelData() = default;
  PanelData(Index n, Index t, Index k);
  // y[t * N + i], x[(t * k + j) * N + i]. Rejects non-finite values.
  PanelData(Index n, Index t, Index k, std::vector<double> y, std::vector<double> x);

  Index N() const noexcept { return n_; }
  Index T() const noexcept { return t_; }
  Index k() const noexcept { return k_; }

  std::span<const double> y(Index t) const {
    return std::span<const double>(y_).subspan(static_cast<std::size_t>(t * n_),
                                               static_cast<std::size_t>(n_));
  }
  std::span<double> y(Index t) {
    return std::span<double>(y_).subspan(static_cast<std::size_t>(t * n_),
                                         static_cast<std::size_t>(n_));
  }
  std::span<const double> x(Index t, Index j) const {
    return std::span<const double>(x_).subspan(
        static_cast<std::size_t>((t * k_ + j) * n_), static_cast<std::size_t>(n_));
  }
  std::span<double> x(Index t, Index j) {
    return std::span<double>(x_).subspan(static_cast<std::size_t>((t * k_ + j) * n_),
                                         static_cast<std::size_t>(n_));
  }
  std::span<const double> y_all() const noexcept { return y_; }
  std::span<const double> x_all() const noexcept { return x_; }

  // Row i of the result is row p.forward[i] of this panel.
  PanelData Permuted(const Permutation& p) const;
  // Inverse of Permuted.
  PanelData Unpermuted(const Permutation& p) const;
  // Rows restricted to `cells`, in that order.
  PanelData RestrictCells(std::span<const Index> cells) const;

  bool operator==(const PanelData&) const = default;

 private:
  Index n_ = 0, t_ = 0, k_ = 0;
  std::vector<double> y_;
  std::vector<double> x_;
};

// Requires data rows to be in the weights' internal ordering.
void CheckAligned(const PanelData& data, const SpatialWeights& w);

BandedSymMatrix BuildS(const SpatialWeights& w, double lambda);
BandedSymMatrix BuildR(const SpatialWeights& w, const DependenceParams& theta);
// S(lambda)^2 - R(theta)^2 via two band products.
BandedSymMatrix BuildG(const SpatialWeights& w, const DependenceParams& theta);

// a' theta < c over theta = (lambda, gamma, rho).
struct HalfSpace {
  std::array<double, 3> a{};
  double c = 0.0;
  std::string label;

  double Slack(const DependenceParams& theta) const {
    const auto t = theta.AsArray();
    return c - (a[0] * t[0] + a[1] * t[1] + a[2] * t[2]);
  }
};

struct FeasibilityVerdict {
  bool feasible = true;
  std::vector<std::string> violated;
  explicit operator bool() const noexcept { return feasible; }
};

FeasibilityVerdict FeasibilityCheck(double d_min, double d_max,
                                    const DependenceParams& theta,
                                    double margin = kFeasibilityMargin);
inline FeasibilityVerdict FeasibilityCheck(const SpatialWeights& w,
                                           const DependenceParams& theta,
                                           double margin = kFeasibilityMargin) {
  return FeasibilityCheck(w.d_min(), w.d_max(), theta, margin);
}

// The six half-spaces of the sufficient stationarity set. Constraints that do
// not bind (W = 0) have a = 0 and c = +inf.
std::array<HalfSpace, 6> PolytopeConstraints(double d_min, double d_max);
inline std::array<HalfSpace, 6> PolytopeConstraints(const SpatialWeights& w) {
  return PolytopeConstraints(w.d_min(), w.d_max());
}

}  // namespace stqmle
