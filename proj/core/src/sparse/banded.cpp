#include "stqmle/sparse/banded.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stqmle {

BandedSymMatrix::BandedSymMatrix(Index n, Index bandwidth)
    : n_(n), b_(std::max<Index>(0, std::min(bandwidth, std::max<Index>(n - 1, 0)))) {
  if (n < 0 || bandwidth < 0) {
    throw Error(ErrorCode::kInvalidArgument, "BandedSymMatrix: negative size");
  }
  data_.assign(static_cast<std::size_t>(n_ * (b_ + 1)), 0.0);
}

BandedSymMatrix BandedSymMatrix::Identity(Index n) {
  BandedSymMatrix m(n, 0);
  std::fill(m.data_.begin(), m.data_.end(), 1.0);
  return m;
}

Index BandedSymMatrix::TightBandwidth() const {
  for (Index off = b_; off > 0; --off) {
    for (Index j = 0; j + off < n_; ++j) {
      if (data_[static_cast<std::size_t>(j * (b_ + 1) + off)] != 0.0) return off;
    }
  }
  return 0;
}

BandedSymMatrix BandedSymMatrix::Tightened() const {
  return WithBandwidth(TightBandwidth());
}

BandedSymMatrix BandedSymMatrix::WithBandwidth(Index bandwidth) const {
  BandedSymMatrix out(n_, bandwidth);
  const Index keep = std::min(out.b_, b_);
  for (Index j = 0; j < n_; ++j) {
    const auto src = column(j);
    auto dst = out.column(j);
    std::copy(src.begin(), src.begin() + keep + 1, dst.begin());
  }
  return out;
}

std::vector<double> BandedSymMatrix::ToDense() const {
  std::vector<double> d(static_cast<std::size_t>(n_ * n_), 0.0);
  for (Index j = 0; j < n_; ++j) {
    for (Index i = j; i <= std::min(n_ - 1, j + b_); ++i) {
      const double v = (*this)(i, j);
      d[static_cast<std::size_t>(i * n_ + j)] = v;
      d[static_cast<std::size_t>(j * n_ + i)] = v;
    }
  }
  return d;
}

void BandSpmv(const BandedSymMatrix& a, std::span<const double> v,
              std::span<double> out) {
  const Index n = a.dim();
  if (static_cast<Index>(v.size()) != n || static_cast<Index>(out.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch, "BandSpmv");
  }
  const Index b = a.bandwidth();
  const double* data = a.data().data();
  std::fill(out.begin(), out.end(), 0.0);
  for (Index j = 0; j < n; ++j) {
    const double* col = data + j * (b + 1);
    const Index m = std::min(b, n - 1 - j);
    const double vj = v[j];
    double s = col[0] * vj;
    double* oj = out.data() + j;
    const double* vv = v.data() + j;
    for (Index r = 1; r <= m; ++r) {
      oj[r] += col[r] * vj;
      s += col[r] * vv[r];
    }
    oj[0] += s;
  }
}

std::vector<double> BandSpmv(const BandedSymMatrix& a, std::span<const double> v) {
  std::vector<double> out(v.size());
  BandSpmv(a, v, out);
  return out;
}

double BandBilinear(const BandedSymMatrix& a, std::span<const double> x,
                    std::span<const double> y) {
  const Index n = a.dim();
  if (static_cast<Index>(x.size()) != n || static_cast<Index>(y.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch, "BandBilinear");
  }
  const Index b = a.bandwidth();
  const double* data = a.data().data();
  double total = 0.0;
  for (Index j = 0; j < n; ++j) {
    const double* col = data + j * (b + 1);
    const Index m = std::min(b, n - 1 - j);
    const double* xx = x.data() + j;
    const double* yy = y.data() + j;
    // Column j of the lower band contributes x_i a_ij y_j and x_j a_ij y_i.
    double s = col[0] * xx[0] * yy[0];
    double sx = 0.0, sy = 0.0;
    for (Index r = 1; r <= m; ++r) {
      sx += col[r] * xx[r];
      sy += col[r] * yy[r];
    }
    total += s + sx * yy[0] + sy * xx[0];
  }
  return total;
}

BandedSymMatrix BandProduct(const BandedSymMatrix& a, const BandedSymMatrix& b) {
  const Index n = a.dim();
  if (b.dim() != n) throw Error(ErrorCode::kDimensionMismatch, "BandProduct");
  const Index ba = a.bandwidth();
  const Index bb = b.bandwidth();
  BandedSymMatrix c(n, ba + bb);
  const Index bc = c.bandwidth();
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i <= std::min(n - 1, j + bc); ++i) {
      // C(i, j) = sum_k A(i, k) B(k, j);  C(j, i) = sum_k A(j, k) B(k, i).
      double lo = 0.0;
      {
        const Index k0 = std::max<Index>({0, i - ba, j - bb});
        const Index k1 = std::min<Index>({n - 1, i + ba, j + bb});
        for (Index k = k0; k <= k1; ++k) lo += a(i, k) * b(k, j);
      }
      double hi = 0.0;
      {
        const Index k0 = std::max<Index>({0, j - ba, i - bb});
        const Index k1 = std::min<Index>({n - 1, j + ba, i + bb});
        for (Index k = k0; k <= k1; ++k) hi += a(j, k) * b(k, i);
      }
      const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
      if (std::abs(lo - hi) > 1e-10 * scale) {
        std::ostringstream os;
        os << "BandProduct: result not symmetric at (" << i << ", " << j
           << "): " << lo << " vs " << hi << " (inputs do not commute)";
        throw Error(ErrorCode::kSymmetryViolation, os.str());
      }
      c.lower(i, j) = 0.5 * (lo + hi);
    }
  }
  return c.Tightened();
}

BandedSymMatrix BandAxpby(double alpha, const BandedSymMatrix& a, double beta,
                          const BandedSymMatrix& b) {
  const Index n = a.dim();
  if (b.dim() != n) throw Error(ErrorCode::kDimensionMismatch, "BandAxpby");
  BandedSymMatrix c(n, std::max(a.bandwidth(), b.bandwidth()));
  for (Index j = 0; j < n; ++j) {
    auto cc = c.column(j);
    const auto ca = a.column(j);
    const auto cb = b.column(j);
    for (std::size_t r = 0; r < ca.size(); ++r) cc[r] += alpha * ca[r];
    for (std::size_t r = 0; r < cb.size(); ++r) cc[r] += beta * cb[r];
  }
  return c.Tightened();
}

BandedSymMatrix BandShiftScale(double c0, double c1, const BandedSymMatrix& a) {
  BandedSymMatrix c(a.dim(), c1 == 0.0 ? 0 : a.bandwidth());
  for (Index j = 0; j < a.dim(); ++j) {
    auto cc = c.column(j);
    if (c1 != 0.0) {
      const auto ca = a.column(j);
      for (std::size_t r = 0; r < ca.size(); ++r) cc[r] = c1 * ca[r];
    }
    cc[0] += c0;
  }
  return c.Tightened();
}

}  // namespace stqmle
