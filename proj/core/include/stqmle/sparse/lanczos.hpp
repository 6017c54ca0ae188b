#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "stqmle/sparse/sym_sparse_matrix.hpp"

namespace stqmle {

struct LanczosOptions {
  double tol = 1e-10;         // absolute accuracy on the extreme eigenvalues
  int restart_dim = 20;       // Krylov basis size before a thick restart
  int max_restarts = 500;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;  // random start vector
};

struct ExtremeEigenResult {
  double d_min = 0.0;
  double d_max = 0.0;
  double residual_min = 0.0;  // Ritz residual norms at convergence
  double residual_max = 0.0;
  int restarts = 0;           // summed over all runs
  int matvecs = 0;
  std::uint64_t seed = 0;     // seed of the random start vector
  // Smallest Krylov dimension at which a run broke down (found an invariant
  // subspace); -1 when no run broke down.
  int breakdown_dim = -1;
};

// Extreme eigenvalues of a symmetric operator of dimension n via thick-restart
// Lanczos with full reorthogonalization. Each end is computed from the
// normalized all-ones vector and again from a seeded random vector, and the
// outermost converged Ritz values are kept: every Ritz value lies inside the
// spectrum, so the second run only matters when the all-ones vector misses an
// extreme eigenvector (as on bipartite grids with an even side).
ExtremeEigenResult ExtremeEigenvalues(
    Index n, const std::function<void(std::span<const double>, std::span<double>)>& apply,
    const LanczosOptions& options = {});

ExtremeEigenResult ExtremeEigenvalues(const SymSparseMatrix& w,
                                      const LanczosOptions& options = {});

}  // namespace stqmle
