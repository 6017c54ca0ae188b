#pragma once

#include <span>
#include <vector>

#include "stqmle/sparse/banded.hpp"
#include "stqmle/sparse/sym_sparse_matrix.hpp"

namespace stqmle {

// Bijection on [0, N). forward[new] = old; inverse[old] = new.
class Permutation {
 public:
  Permutation() = default;

  static Permutation Identity(Index n);
  // Validates that `forward` is a bijection.
  static Permutation FromForward(std::vector<Index> forward);

  Index size() const noexcept { return static_cast<Index>(forward_.size()); }
  std::span<const Index> forward() const noexcept { return forward_; }
  std::span<const Index> inverse() const noexcept { return inverse_; }

  // out[new] = in[forward[new]].
  template <class T>
  std::vector<T> Gather(std::span<const T> in) const {
    std::vector<T> out(forward_.size());
    for (std::size_t i = 0; i < forward_.size(); ++i) out[i] = in[forward_[i]];
    return out;
  }
  // out[forward[new]] = in[new].
  template <class T>
  std::vector<T> Scatter(std::span<const T> in) const {
    std::vector<T> out(forward_.size());
    for (std::size_t i = 0; i < forward_.size(); ++i) out[forward_[i]] = in[i];
    return out;
  }

 private:
  std::vector<Index> forward_;
  std::vector<Index> inverse_;
};

// Reverse Cuthill-McKee ordering. Components are visited in ascending order of
// their smallest vertex; each starts from a pseudo-peripheral vertex found by
// the George-Liu search seeded at that smallest vertex, and neighbours are
// queued by ascending degree, ties by ascending index. If the result would
// widen the bandwidth, the identity is returned instead.
Permutation RcmOrder(const SymSparseMatrix& w);

// entry(i, j) of the result = w(p.forward[i], p.forward[j]).
BandedSymMatrix ApplyPermutation(const SymSparseMatrix& w, const Permutation& p);

// Same reordering, kept in CSR form.
SymSparseMatrix PermuteSparse(const SymSparseMatrix& w, const Permutation& p);

}  // namespace stqmle
