#include "stqmle/sparse/permutation.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace stqmle {

Permutation Permutation::Identity(Index n) {
  std::vector<Index> f(static_cast<std::size_t>(n));
  std::iota(f.begin(), f.end(), Index{0});
  return FromForward(std::move(f));
}

Permutation Permutation::FromForward(std::vector<Index> forward) {
  Permutation p;
  const Index n = static_cast<Index>(forward.size());
  p.inverse_.assign(forward.size(), -1);
  for (Index i = 0; i < n; ++i) {
    const Index v = forward[i];
    if (v < 0 || v >= n || p.inverse_[v] != -1) {
      throw Error(ErrorCode::kInvalidArgument, "Permutation: not a bijection");
    }
    p.inverse_[v] = i;
  }
  p.forward_ = std::move(forward);
  return p;
}

namespace {

struct LevelInfo {
  Index eccentricity = 0;
  std::vector<Index> last_level;
};

// BFS level structure restricted to unmarked vertices.
LevelInfo Levels(const SymSparseMatrix& w, Index root, std::vector<Index>& stamp,
                 Index tag, std::vector<Index>& queue) {
  LevelInfo info;
  queue.clear();
  queue.push_back(root);
  stamp[root] = tag;
  std::size_t level_begin = 0;
  while (true) {
    const std::size_t level_end = queue.size();
    for (std::size_t q = level_begin; q < level_end; ++q) {
      for (Index u : w.row_cols(queue[q])) {
        if (stamp[u] != tag) {
          stamp[u] = tag;
          queue.push_back(u);
        }
      }
    }
    if (queue.size() == level_end) {
      info.last_level.assign(queue.begin() + static_cast<std::ptrdiff_t>(level_begin),
                             queue.end());
      return info;
    }
    level_begin = level_end;
    ++info.eccentricity;
  }
}

Index PseudoPeripheral(const SymSparseMatrix& w, Index start,
                       std::vector<Index>& stamp, Index& tag,
                       std::vector<Index>& queue) {
  Index root = start;
  LevelInfo info = Levels(w, root, stamp, ++tag, queue);
  while (true) {
    Index best = info.last_level.front();
    for (Index v : info.last_level) {
      if (w.degree(v) < w.degree(best) ||
          (w.degree(v) == w.degree(best) && v < best)) {
        best = v;
      }
    }
    LevelInfo next = Levels(w, best, stamp, ++tag, queue);
    if (next.eccentricity <= info.eccentricity) return root;
    root = best;
    info = std::move(next);
  }
}

Index PermutedBandwidth(const SymSparseMatrix& w, std::span<const Index> inverse) {
  Index b = 0;
  for (Index i = 0; i < w.dim(); ++i) {
    for (Index j : w.row_cols(i)) b = std::max(b, std::abs(inverse[i] - inverse[j]));
  }
  return b;
}

}  // namespace

Permutation RcmOrder(const SymSparseMatrix& w) {
  const Index n = w.dim();
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<char> placed(static_cast<std::size_t>(n), 0);
  std::vector<Index> stamp(static_cast<std::size_t>(n), 0);
  std::vector<Index> queue;
  std::vector<Index> nbrs;
  Index tag = 0;

  for (Index seed = 0; seed < n; ++seed) {
    if (placed[seed]) continue;
    // Vertices are visited component by component, so `seed` is always the
    // smallest vertex of a new component.
    const Index root = PseudoPeripheral(w, seed, stamp, tag, queue);
    std::size_t head = order.size();
    order.push_back(root);
    placed[root] = 1;
    while (head < order.size()) {
      const Index v = order[head++];
      nbrs.clear();
      for (Index u : w.row_cols(v)) {
        if (!placed[u]) nbrs.push_back(u);
      }
      std::sort(nbrs.begin(), nbrs.end(), [&](Index a, Index b) {
        return w.degree(a) != w.degree(b) ? w.degree(a) < w.degree(b) : a < b;
      });
      for (Index u : nbrs) {
        placed[u] = 1;
        order.push_back(u);
      }
    }
  }
  std::reverse(order.begin(), order.end());
  Permutation rcm = Permutation::FromForward(std::move(order));
  if (PermutedBandwidth(w, rcm.inverse()) > w.bandwidth()) {
    return Permutation::Identity(n);
  }
  return rcm;
}

BandedSymMatrix ApplyPermutation(const SymSparseMatrix& w, const Permutation& p) {
  const Index n = w.dim();
  if (p.size() != n) throw Error(ErrorCode::kDimensionMismatch, "ApplyPermutation");
  const auto inv = p.inverse();
  BandedSymMatrix out(n, PermutedBandwidth(w, inv));
  for (Index i = 0; i < n; ++i) {
    auto cols = w.row_cols(i);
    auto vals = w.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const Index a = inv[i];
      const Index b = inv[cols[k]];
      if (a >= b) out.lower(a, b) = vals[k];
    }
  }
  return out.Tightened();
}

SymSparseMatrix PermuteSparse(const SymSparseMatrix& w, const Permutation& p) {
  if (p.size() != w.dim()) throw Error(ErrorCode::kDimensionMismatch, "PermuteSparse");
  const auto inv = p.inverse();
  std::vector<Triplet> upper;
  for (const Triplet& t : w.UpperTriplets()) {
    upper.push_back({inv[t.row], inv[t.col], t.value});
  }
  return SymSparseMatrix::FromTriangle(w.dim(), upper);
}

}  // namespace stqmle
