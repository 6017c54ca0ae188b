#pragma once

#include <span>
#include <vector>

#include "stqmle/error.hpp"

namespace stqmle {

// Symmetric banded matrix, dense within the band.
//
// Only the lower band is stored, column by column: entry (i, j) with
// 0 <= i - j <= b lives at data[j * (b + 1) + (i - j)]. Slots that fall past
// the last row are kept as zero. Matrices returned by the free functions in
// this header have a tight bandwidth.
class BandedSymMatrix {
 public:
  BandedSymMatrix() = default;
  BandedSymMatrix(Index n, Index bandwidth);

  static BandedSymMatrix Identity(Index n);

  Index dim() const noexcept { return n_; }
  Index bandwidth() const noexcept { return b_; }
  Index stride() const noexcept { return b_ + 1; }

  // Any (i, j); zero outside the band.
  double operator()(Index i, Index j) const {
    if (i < j) std::swap(i, j);
    if (i - j > b_) return 0.0;
    return data_[static_cast<std::size_t>(j * (b_ + 1) + (i - j))];
  }

  // Mutable reference for i >= j, i - j <= bandwidth.
  double& lower(Index i, Index j) {
    return data_[static_cast<std::size_t>(j * (b_ + 1) + (i - j))];
  }

  std::span<const double> column(Index j) const {
    return std::span<const double>(data_).subspan(
        static_cast<std::size_t>(j * (b_ + 1)), static_cast<std::size_t>(b_ + 1));
  }
  std::span<double> column(Index j) {
    return std::span<double>(data_).subspan(
        static_cast<std::size_t>(j * (b_ + 1)), static_cast<std::size_t>(b_ + 1));
  }

  std::span<const double> data() const noexcept { return data_; }

  // Smallest b' such that all entries beyond offset b' are exactly zero.
  Index TightBandwidth() const;

  // Copy with storage trimmed to the tight bandwidth.
  BandedSymMatrix Tightened() const;

  // Copy with storage widened (or trimmed, if the dropped diagonals are zero)
  // to the given bandwidth.
  BandedSymMatrix WithBandwidth(Index bandwidth) const;

  // Dense row-major copy, for tests and small diagnostics.
  std::vector<double> ToDense() const;

 private:
  Index n_ = 0;
  Index b_ = 0;
  std::vector<double> data_;
};

// out = A * v. O(bN).
void BandSpmv(const BandedSymMatrix& a, std::span<const double> v,
              std::span<double> out);
std::vector<double> BandSpmv(const BandedSymMatrix& a, std::span<const double> v);

// x' A y without materialising A y.
double BandBilinear(const BandedSymMatrix& a, std::span<const double> x,
                    std::span<const double> y);

// A * B for commuting symmetric banded matrices. The product is computed in
// both triangles and must agree to 1e-10 (relative); otherwise the inputs did
// not commute and kSymmetryViolation is thrown.
BandedSymMatrix BandProduct(const BandedSymMatrix& a, const BandedSymMatrix& b);

// alpha * A + beta * B.
BandedSymMatrix BandAxpby(double alpha, const BandedSymMatrix& a, double beta,
                          const BandedSymMatrix& b);

// c0 * I + c1 * A.
BandedSymMatrix BandShiftScale(double c0, double c1, const BandedSymMatrix& a);

}  // namespace stqmle
