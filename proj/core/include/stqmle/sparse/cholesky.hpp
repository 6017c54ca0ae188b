#pragma once

#include <span>
#include <vector>

#include "stqmle/sparse/banded.hpp"

namespace stqmle {

// Lower banded Cholesky factor L with A = L L'. Same column-wise band storage
// as BandedSymMatrix; the strict upper triangle is implicit zero.
class CholeskyFactor {
 public:
  Index dim() const noexcept { return n_; }
  Index bandwidth() const noexcept { return b_; }
  double log_det() const noexcept { return log_det_; }

  // L(i, j) for i >= j.
  double L(Index i, Index j) const {
    if (i < j || i - j > b_) return 0.0;
    return data_[static_cast<std::size_t>(j * (b_ + 1) + (i - j))];
  }

  // In-place solves: L x = rhs, L' x = rhs, and A x = rhs.
  void SolveLower(std::span<double> x) const;
  void SolveUpper(std::span<double> x) const;
  void Solve(std::span<double> x) const;

 private:
  friend CholeskyFactor BandedCholesky(const BandedSymMatrix& a);

  Index n_ = 0;
  Index b_ = 0;
  double log_det_ = 0.0;
  std::vector<double> data_;
};

// Right-looking banded Cholesky in O(b^2 N). Throws NotPositiveDefinite with
// the offending pivot index when a pivot is not strictly positive.
CholeskyFactor BandedCholesky(const BandedSymMatrix& a);

}  // namespace stqmle
