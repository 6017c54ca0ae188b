#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stqmle/likelihood.hpp"
#include "stqmle/model.hpp"

namespace stqmle {

struct OptimizerConfig {
  int max_iters = 200;
  // On the infinity norm of the per-observation gradient, relative to
  // 1 + |loglik| / NT.
  double grad_tol = 1e-6;
  double step_tol = 1e-10;
  DependenceParams initial_theta{};
  // Profile beta by GLS (default) or optimise it jointly with theta.
  bool profile_beta = true;
  // Also start from four lattice points inside the polytope and keep the best.
  bool multistart = false;
  std::uint64_t seed = 0;

  // Throws kInvalidArgument on non-positive tolerances or iteration limits.
  void Validate() const;
};

enum class FitStatus { kConverged, kStepTolerance, kMaxIters };
const char* ToString(FitStatus status);

struct FitDiagnostics {
  FitStatus status = FitStatus::kConverged;
  int iterations = 0;
  double grad_norm = 0.0;  // infinity norm of the per-observation gradient
  std::vector<double> loglik_trace;
  int boundary_hits = 0;   // trial points rejected as infeasible
  int hessian_resets = 0;
  std::int64_t evaluations = 0;
  int starts = 1;
  double setup_seconds = 0.0;
  double optimize_seconds = 0.0;
  double total_seconds = 0.0;
};

struct FitResult {
  ModelParams params;
  double loglik = 0.0;
  double logdet_K = 0.0;
  double logdet_S_abs = 0.0;
  // [Y, X]' Sigma^-1(theta_hat) [Y, X], reused by the inference module.
  SmallMatrix gram;
  FitDiagnostics diagnostics;
};

// QMLE of (beta, theta, sigma2). `data` is in the caller's cell order (as read
// from disk); it is aligned to the weights internally.
FitResult Fit(const PanelData& data, const SpatialWeights& w, const OptimizerConfig& cfg = {});

// Same, for data already in the weights' internal order.
FitResult FitAligned(const PanelData& aligned, const SpatialWeights& w,
                     const OptimizerConfig& cfg = {});

struct LineSearchOptions {
  double c1 = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 40;
};

struct LineSearchResult {
  bool accepted = false;
  double alpha = 0.0;
  double value = 0.0;
  int backtracks = 0;
  int infeasible_trials = 0;
};

// Backtracking from alpha = 1 until x + alpha d is feasible and satisfies the
// Armijo increase f(x + alpha d) >= f0 + c1 alpha g'd. Throws kNoAscent when
// g'd <= 0. `f` is only called at feasible points.
LineSearchResult LineSearchFeasible(
    const std::function<double(const std::vector<double>&)>& f,
    const std::function<bool(const std::vector<double>&)>& feasible,
    const std::vector<double>& x, const std::vector<double>& direction, double f0,
    double slope, const LineSearchOptions& options = {});

}  // namespace stqmle
