#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "stqmle/model.hpp"
#include "stqmle/optimizer.hpp"
#include "stqmle/rng.hpp"

namespace stqmle {

// First order: the 4 rook neighbours. Second order: the 8 queen neighbours.
enum class NeighborOrder { kFirst, kSecond };

// Binary adjacency of an n x n grid; cell (r, c) has id r * n + c.
SymSparseMatrix GridAdjacency(Index n, NeighborOrder order = NeighborOrder::kFirst);

SpatialWeights MakeGridWeights(Index n, NeighborOrder order = NeighborOrder::kFirst,
                               const WeightsOptions& options = {});

enum class InnovationFamily { kGaussian, kStudentT };

struct SimulationDesign {
  Index grid_side = 10;
  Index T = 5;
  NeighborOrder order = NeighborOrder::kFirst;
  ModelParams truth;
  InnovationFamily family = InnovationFamily::kGaussian;
  double df = 5.0;  // student_t only; must exceed 4
  Index burn_in = 200;
  Index n_reps = 100;
  std::uint64_t seed = 20240101;

  Index N() const noexcept { return grid_side * grid_side; }
  // Throws kInvalidArgument on bad sizes, sigma2 <= 0 or df <= 4.
  void Validate() const;
};

// beta = (1, 0.5), theta = (0.05, 0.7, -0.03), sigma2 = 1.
SimulationDesign DefaultPreset(Index grid_side = 10, Index t_len = 5);
// As DefaultPreset but with sigma2 = 0.1.
SimulationDesign LiteralPreset(Index grid_side = 10, Index t_len = 5);

// Intercept plus one standard Gaussian covariate, laid out as PanelData::x.
// Drawn from its own stream of `seed`, so it is the same for every
// replication of a design.
std::vector<double> MakeDesignMatrix(Index n, Index t_len, std::uint64_t seed);

// One panel from the model, in input cell order. W must be built for the
// design's grid; `x` comes from MakeDesignMatrix. Throws kInfeasibleTheta when
// the true theta is outside the polytope.
PanelData SimulatePanel(const SimulationDesign& design, const SpatialWeights& w,
                        const std::vector<double>& x, Rng& rng);

// Replication 0 of the design, building W and X itself.
PanelData SimulatePanel(const SimulationDesign& design);

struct ParameterSummary {
  std::string name;
  double truth = 0.0;
  double mean = 0.0;
  double bias = 0.0;
  double mse = 0.0;
  double sd = 0.0;         // sample SD across replications
  double bias_se = 0.0;    // sd / sqrt(replications)
  double mean_plugin_se = std::numeric_limits<double>::quiet_NaN();  // beta only
  double coverage = std::numeric_limits<double>::quiet_NaN();        // beta only
};

struct ReplicationResult {
  bool ok = false;
  std::string error;
  std::vector<double> estimates;  // beta..., lambda, gamma, rho, sigma2
  std::vector<double> beta_se;
  FitStatus status = FitStatus::kConverged;
  double fit_seconds = 0.0;
};

struct MonteCarloOptions {
  int threads = 1;
  double level = 0.95;  // confidence level of the beta intervals
};

struct MonteCarloSummary {
  Index requested = 0;
  Index succeeded = 0;
  Index failed = 0;
  bool empty = false;            // no replications requested
  bool failure_flag = false;     // more than 1% of replications failed
  std::vector<std::string> names;
  std::vector<ParameterSummary> parameters;
  double mean_fit_seconds = 0.0;
  std::vector<ReplicationResult> replications;
};

// Independent replications on per-replication streams of design.seed,
// aggregated in replication order (results do not depend on `threads`).
MonteCarloSummary RunMonteCarlo(const SimulationDesign& design, const OptimizerConfig& fit_cfg,
                                const MonteCarloOptions& options = {});

// Same, reusing prebuilt weights for the design grid.
MonteCarloSummary RunMonteCarlo(const SimulationDesign& design, const SpatialWeights& w,
                                const OptimizerConfig& fit_cfg,
                                const MonteCarloOptions& options = {});

}  // namespace stqmle
