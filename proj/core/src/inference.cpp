#include "stqmle/inference.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <sstream>

#include "stqmle/parallel.hpp"

namespace stqmle {

SmallMatrix BetaCovarianceFromGram(const SmallMatrix& gram, double sigma2) {
  SmallMatrix cov = InvertDesignBlock(gram);
  for (double& v : cov.a) v *= sigma2;
  return cov;
}

SmallMatrix BetaCovariance(const PanelData& aligned, const DependenceParams& theta,
                           double sigma2, const SpatialWeights& w) {
  LikelihoodWorkspace ws(w);
  ws.Update(theta);
  return BetaCovarianceFromGram(PrecisionGram(aligned, ws), sigma2);
}

double CriticalValue(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1]");
  }
  if (alpha == 1.0) return 0.0;
  return boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - alpha / 2.0);
}

InferenceReport ConfidenceIntervals(const ModelParams& estimate, const SmallMatrix& beta_cov,
                                    double alpha) {
  const std::size_t k = estimate.beta.size();
  if (static_cast<Index>(k) != beta_cov.n) {
    throw Error(ErrorCode::kDimensionMismatch, "covariance size differs from beta length");
  }
  const double z = CriticalValue(alpha);
  InferenceReport r;
  r.beta_hat = estimate.beta;
  r.alpha = alpha;
  r.theta_hat = estimate.theta;
  r.sigma2_hat = estimate.sigma2;
  for (std::size_t j = 0; j < k; ++j) {
    const double se = std::sqrt(beta_cov(static_cast<Index>(j), static_cast<Index>(j)));
    r.beta_se.push_back(se);
    r.ci_lower.push_back(estimate.beta[j] - z * se);
    r.ci_upper.push_back(estimate.beta[j] + z * se);
  }
  return r;
}

std::vector<std::vector<Index>> LayoutBlocks(const BlockSpec& spec) {
  if (spec.grid_rows < 1 || spec.grid_cols < 1) {
    throw Error(ErrorCode::kInvalidArgument, "block layout needs the grid dimensions");
  }
  const Index n = spec.grid_rows * spec.grid_cols;
  const Index side = spec.block_side > 0
                         ? spec.block_side
                         : static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n)) / 3.0));
  const Index stride = spec.stride > 0 ? spec.stride : side;
  std::vector<std::vector<Index>> blocks;
  for (Index r0 = 0; r0 + side <= spec.grid_rows; r0 += stride) {
    for (Index c0 = 0; c0 + side <= spec.grid_cols; c0 += stride) {
      std::vector<Index> cells;
      cells.reserve(static_cast<std::size_t>(side * side));
      for (Index r = r0; r < r0 + side; ++r) {
        for (Index c = c0; c < c0 + side; ++c) cells.push_back(r * spec.grid_cols + c);
      }
      blocks.push_back(std::move(cells));
    }
  }
  return blocks;
}

SubsamplingResult ThetaSubsamplingSe(const PanelData& data, const SpatialWeights& w,
                                     const OptimizerConfig& cfg, const BlockSpec& spec,
                                     int threads) {
  if (spec.grid_rows * spec.grid_cols != data.N() || data.N() != w.N()) {
    throw Error(ErrorCode::kDimensionMismatch, "block grid does not match the panel");
  }
  const auto blocks = LayoutBlocks(spec);
  SubsamplingResult out;
  out.block_count = static_cast<Index>(blocks.size());
  out.block_cells = blocks.empty() ? 0 : static_cast<Index>(blocks.front().size());
  if (out.block_count < spec.min_blocks || out.block_cells < spec.min_cells ||
      out.block_cells == data.N()) {
    std::ostringstream os;
    os << "spatial subsampling needs at least " << spec.min_blocks << " blocks of at least "
       << spec.min_cells << " cells; layout gives " << out.block_count << " blocks of "
       << out.block_cells << " cells";
    throw Error(ErrorCode::kTooFewBlocks, os.str());
  }

  struct BlockFit {
    bool ok = false;
    std::array<double, 3> theta{};
    std::string error;
  };
  std::vector<BlockFit> fits(blocks.size());
  ParallelFor(out.block_count, threads, [&](Index b) {
    BlockFit& f = fits[static_cast<std::size_t>(b)];
    try {
      const auto& cells = blocks[static_cast<std::size_t>(b)];
      const SpatialWeights wb = SpatialWeights::Build(w.original().Restrict(cells));
      const FitResult r = Fit(data.RestrictCells(cells), wb, cfg);
      f.theta = r.params.theta.AsArray();
      f.ok = true;
    } catch (const std::exception& e) {
      f.error = e.what();
    }
  });

  for (std::size_t b = 0; b < fits.size(); ++b) {
    if (fits[b].ok) {
      out.block_theta.push_back(fits[b].theta);
    } else {
      std::ostringstream os;
      os << "block " << b << ": " << fits[b].error;
      out.failures.push_back(os.str());
    }
  }
  const double fail_fraction =
      static_cast<double>(out.failures.size()) / static_cast<double>(fits.size());
  if (fail_fraction >= 0.2 || out.block_theta.size() < 2) {
    std::ostringstream os;
    os << out.failures.size() << " of " << fits.size() << " block fits failed";
    throw Error(ErrorCode::kTooFewBlocks, os.str());
  }
  if (!out.failures.empty()) {
    std::ostringstream os;
    os << out.failures.size() << " of " << fits.size() << " block fits failed and were excluded";
    out.warnings.push_back(os.str());
  }

  const double m = static_cast<double>(out.block_theta.size());
  const double scale =
      std::sqrt(static_cast<double>(out.block_cells) / static_cast<double>(data.N()));
  for (int j = 0; j < 3; ++j) {
    double mean = 0.0;
    for (const auto& th : out.block_theta) mean += th[j];
    mean /= m;
    double ss = 0.0;
    for (const auto& th : out.block_theta) ss += (th[j] - mean) * (th[j] - mean);
    out.se[j] = std::sqrt(ss / (m - 1.0)) * scale;
  }
  return out;
}

}  // namespace stqmle
