#pragma once

#include <span>
#include <vector>

#include "stqmle/error.hpp"

namespace stqmle {

struct Triplet {
  Index row;
  Index col;
  double value;
};

// Symmetric sparse matrix in CSR layout with both triangles stored.
//
// Rows hold strictly increasing column indices, explicit zeros are dropped,
// and entry (i, j) is present iff (j, i) is present with the same value.
class SymSparseMatrix {
 public:
  SymSparseMatrix() = default;

  // Builds from one triangle: each (i, j) also defines (j, i). Either
  // triangle may be used, but a coordinate (and its mirror) may appear once.
  static SymSparseMatrix FromTriangle(Index n, std::span<const Triplet> entries);

  // Builds from a full (both-triangle) listing and verifies symmetry. Throws
  // kSymmetryViolation citing the first unmatched coordinate (0-based).
  static SymSparseMatrix FromGeneral(Index n, std::span<const Triplet> entries);

  Index dim() const noexcept { return n_; }
  Index nnz() const noexcept { return static_cast<Index>(values_.size()); }

  std::span<const Index> row_ptr() const noexcept { return row_ptr_; }
  std::span<const Index> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const Index> row_cols(Index i) const {
    return std::span<const Index>(col_idx_).subspan(
        row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]);
  }
  std::span<const double> row_values(Index i) const {
    return std::span<const double>(values_).subspan(
        row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]);
  }
  Index degree(Index i) const { return row_ptr_[i + 1] - row_ptr_[i]; }

  // Value at (i, j); zero when not stored. O(log degree).
  double at(Index i, Index j) const;

  // max |i - j| over stored entries.
  Index bandwidth() const;

  // out = A * v.
  void Multiply(std::span<const double> v, std::span<double> out) const;

  // Upper-triangle triplets (row <= col) in row-major order.
  std::vector<Triplet> UpperTriplets() const;

  // Principal submatrix on the given (distinct) vertices, in the given order.
  SymSparseMatrix Restrict(std::span<const Index> vertices) const;

 private:
  static SymSparseMatrix FromSorted(Index n, std::vector<Triplet> full);

  Index n_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

}  // namespace stqmle
