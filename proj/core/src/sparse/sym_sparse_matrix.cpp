#include "stqmle/sparse/sym_sparse_matrix.hpp"

#include <algorithm>
#include <sstream>

namespace stqmle {

namespace {

void CheckCoordinate(Index n, const Triplet& t) {
  if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
    std::ostringstream os;
    os << "coordinate (" << t.row << ", " << t.col << ") outside " << n << "x"
       << n << " matrix";
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
}

bool RowMajorLess(const Triplet& a, const Triplet& b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

}  // namespace

SymSparseMatrix SymSparseMatrix::FromSorted(Index n, std::vector<Triplet> full) {
  SymSparseMatrix m;
  m.n_ = n;
  m.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  m.col_idx_.reserve(full.size());
  m.values_.reserve(full.size());
  for (std::size_t k = 0; k < full.size(); ++k) {
    const Triplet& t = full[k];
    if (k > 0 && full[k - 1].row == t.row && full[k - 1].col == t.col) {
      std::ostringstream os;
      os << "duplicate coordinate (" << t.row << ", " << t.col << ")";
      throw Error(ErrorCode::kInvalidArgument, os.str());
    }
    if (t.value == 0.0) continue;
    m.col_idx_.push_back(t.col);
    m.values_.push_back(t.value);
    ++m.row_ptr_[static_cast<std::size_t>(t.row) + 1];
  }
  for (Index i = 0; i < n; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
  return m;
}

SymSparseMatrix SymSparseMatrix::FromTriangle(Index n,
                                              std::span<const Triplet> entries) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "negative dimension");
  std::vector<Triplet> full;
  full.reserve(entries.size() * 2);
  for (const Triplet& t : entries) {
    CheckCoordinate(n, t);
    full.push_back(t);
    if (t.row != t.col) full.push_back({t.col, t.row, t.value});
  }
  std::sort(full.begin(), full.end(), RowMajorLess);
  return FromSorted(n, std::move(full));
}

SymSparseMatrix SymSparseMatrix::FromGeneral(Index n,
                                             std::span<const Triplet> entries) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "negative dimension");
  std::vector<Triplet> full(entries.begin(), entries.end());
  for (const Triplet& t : full) CheckCoordinate(n, t);
  std::sort(full.begin(), full.end(), RowMajorLess);
  SymSparseMatrix m = FromSorted(n, std::move(full));
  for (Index i = 0; i < n; ++i) {
    auto cols = m.row_cols(i);
    auto vals = m.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const Index j = cols[k];
      if (m.at(j, i) != vals[k]) {
        std::ostringstream os;
        os << "asymmetric entry at (" << i << ", " << j << "): value "
           << vals[k] << " but mirror (" << j << ", " << i << ") is "
           << m.at(j, i);
        throw Error(ErrorCode::kSymmetryViolation, os.str());
      }
    }
  }
  return m;
}

double SymSparseMatrix::at(Index i, Index j) const {
  auto cols = row_cols(i);
  auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values_[row_ptr_[i] + (it - cols.begin())];
}

Index SymSparseMatrix::bandwidth() const {
  Index b = 0;
  for (Index i = 0; i < n_; ++i) {
    auto cols = row_cols(i);
    if (cols.empty()) continue;
    b = std::max({b, i - cols.front(), cols.back() - i});
  }
  return b;
}

void SymSparseMatrix::Multiply(std::span<const double> v,
                               std::span<double> out) const {
  if (static_cast<Index>(v.size()) != n_ ||
      static_cast<Index>(out.size()) != n_) {
    throw Error(ErrorCode::kDimensionMismatch, "SymSparseMatrix::Multiply");
  }
  for (Index i = 0; i < n_; ++i) {
    double s = 0.0;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      s += values_[k] * v[col_idx_[k]];
    }
    out[i] = s;
  }
}

std::vector<Triplet> SymSparseMatrix::UpperTriplets() const {
  std::vector<Triplet> out;
  out.reserve(values_.size() / 2 + static_cast<std::size_t>(n_));
  for (Index i = 0; i < n_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] >= i) out.push_back({i, col_idx_[k], values_[k]});
    }
  }
  return out;
}

SymSparseMatrix SymSparseMatrix::Restrict(std::span<const Index> vertices) const {
  std::vector<Index> local(static_cast<std::size_t>(n_), -1);
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const Index v = vertices[k];
    if (v < 0 || v >= n_ || local[v] >= 0) {
      throw Error(ErrorCode::kInvalidArgument, "Restrict: invalid vertex list");
    }
    local[v] = static_cast<Index>(k);
  }
  std::vector<Triplet> full;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const Index v = vertices[k];
    for (Index p = row_ptr_[v]; p < row_ptr_[v + 1]; ++p) {
      const Index u = local[col_idx_[p]];
      if (u >= 0) full.push_back({static_cast<Index>(k), u, values_[p]});
    }
  }
  std::sort(full.begin(), full.end(), RowMajorLess);
  return FromSorted(static_cast<Index>(vertices.size()), std::move(full));
}

}  // namespace stqmle
