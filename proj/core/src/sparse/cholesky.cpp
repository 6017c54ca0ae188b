#include "stqmle/sparse/cholesky.hpp"

#include <algorithm>
#include <cmath>

namespace stqmle {

CholeskyFactor BandedCholesky(const BandedSymMatrix& a) {
  CholeskyFactor f;
  f.n_ = a.dim();
  f.b_ = a.bandwidth();
  f.data_.assign(a.data().begin(), a.data().end());
  const Index n = f.n_;
  const Index b = f.b_;
  double* data = f.data_.data();
  double log_det = 0.0;
  for (Index j = 0; j < n; ++j) {
    double* col = data + j * (b + 1);
    const double pivot = col[0];
    if (!(pivot > 0.0) || !std::isfinite(pivot)) throw NotPositiveDefinite(j, pivot);
    const double ljj = std::sqrt(pivot);
    col[0] = ljj;
    log_det += std::log(pivot);
    const Index m = std::min(b, n - 1 - j);
    const double inv = 1.0 / ljj;
    for (Index r = 1; r <= m; ++r) col[r] *= inv;
    // Rank-1 update of the trailing (m x m) triangle, one column at a time.
    for (Index c = 1; c <= m; ++c) {
      const double f_c = col[c];
      if (f_c == 0.0) continue;
      double* target = data + (j + c) * (b + 1);
      const double* src = col + c;
      const Index len = m - c;
      for (Index r = 0; r <= len; ++r) target[r] -= src[r] * f_c;
    }
  }
  f.log_det_ = log_det;
  return f;
}

void CholeskyFactor::SolveLower(std::span<double> x) const {
  if (static_cast<Index>(x.size()) != n_) {
    throw Error(ErrorCode::kDimensionMismatch, "CholeskyFactor::SolveLower");
  }
  const double* data = data_.data();
  for (Index j = 0; j < n_; ++j) {
    const double* col = data + j * (b_ + 1);
    const double xj = x[j] / col[0];
    x[j] = xj;
    const Index m = std::min(b_, n_ - 1 - j);
    double* xx = x.data() + j;
    for (Index r = 1; r <= m; ++r) xx[r] -= col[r] * xj;
  }
}

void CholeskyFactor::SolveUpper(std::span<double> x) const {
  if (static_cast<Index>(x.size()) != n_) {
    throw Error(ErrorCode::kDimensionMismatch, "CholeskyFactor::SolveUpper");
  }
  const double* data = data_.data();
  for (Index j = n_ - 1; j >= 0; --j) {
    const double* col = data + j * (b_ + 1);
    const Index m = std::min(b_, n_ - 1 - j);
    const double* xx = x.data() + j;
    double s = x[j];
    for (Index r = 1; r <= m; ++r) s -= col[r] * xx[r];
    x[j] = s / col[0];
  }
}

void CholeskyFactor::Solve(std::span<double> x) const {
  SolveLower(x);
  SolveUpper(x);
}

}  // namespace stqmle
