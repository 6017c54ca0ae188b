#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stqmle/likelihood.hpp"
#include "stqmle/model.hpp"
#include "stqmle/optimizer.hpp"

namespace stqmle {

// sigma2 (X' Sigma^-1(theta) X)^-1 from the banded blocks; `aligned` is in
// the weights' internal order. Throws kSingularDesign.
SmallMatrix BetaCovariance(const PanelData& aligned, const DependenceParams& theta,
                           double sigma2, const SpatialWeights& w);

// The same from a [Y, X] Gram such as FitResult::gram.
SmallMatrix BetaCovarianceFromGram(const SmallMatrix& gram, double sigma2);

// Standard normal quantile z_{1 - alpha / 2}; alpha in (0, 1].
double CriticalValue(double alpha);

struct InferenceReport {
  std::vector<double> beta_hat;
  std::vector<double> beta_se;
  std::vector<double> ci_lower;
  std::vector<double> ci_upper;
  double alpha = 0.05;
  DependenceParams theta_hat{};
  std::optional<std::array<double, 3>> theta_se;
  double sigma2_hat = 0.0;
  std::string beta_method = "plug-in";
  std::string theta_method = "none";
  std::vector<std::string> warnings;
};

// beta_j +- z_{1 - alpha / 2} se_j.
InferenceReport ConfidenceIntervals(const ModelParams& estimate, const SmallMatrix& beta_cov,
                                    double alpha);

// Square blocks on a rows x cols grid whose cell (r, c) has id r * cols + c.
struct BlockSpec {
  Index grid_rows = 0;
  Index grid_cols = 0;
  Index block_side = 0;   // 0: ceil(sqrt(N) / 3)
  Index stride = 0;       // 0: block_side (non-overlapping)
  Index min_cells = 100;
  Index min_blocks = 4;
};

struct SubsamplingResult {
  std::array<double, 3> se{};
  Index block_count = 0;       // blocks laid out
  Index block_cells = 0;
  std::vector<std::array<double, 3>> block_theta;  // successful blocks, in layout order
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
};

// Cell ids of each block, in layout order.
std::vector<std::vector<Index>> LayoutBlocks(const BlockSpec& spec);

// Refits theta on each spatial block with W restricted to the block and
// returns sd(theta_b) * sqrt(block_N / N). `data` is in input cell order.
// Throws kTooFewBlocks when fewer than min_blocks blocks of min_cells fit, or
// when 20% or more of the block fits fail.
SubsamplingResult ThetaSubsamplingSe(const PanelData& data, const SpatialWeights& w,
                                     const OptimizerConfig& cfg, const BlockSpec& spec,
                                     int threads = 1);

}  // namespace stqmle
