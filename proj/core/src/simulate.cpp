#include "stqmle/simulate.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "stqmle/inference.hpp"
#include "stqmle/parallel.hpp"
#include "stqmle/sparse/cholesky.hpp"

namespace stqmle {

SymSparseMatrix GridAdjacency(Index n, NeighborOrder order) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "grid side must be at least 2");
  std::vector<Triplet> t;
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n; ++c) {
      const Index i = r * n + c;
      if (c + 1 < n) t.push_back({i, i + 1, 1.0});
      if (r + 1 < n) t.push_back({i, i + n, 1.0});
      if (order == NeighborOrder::kSecond && r + 1 < n) {
        if (c + 1 < n) t.push_back({i, i + n + 1, 1.0});
        if (c > 0) t.push_back({i, i + n - 1, 1.0});
      }
    }
  }
  return SymSparseMatrix::FromTriangle(n * n, t);
}

SpatialWeights MakeGridWeights(Index n, NeighborOrder order, const WeightsOptions& options) {
  return SpatialWeights::Build(GridAdjacency(n, order), options);
}

void SimulationDesign::Validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::kInvalidArgument, m); };
  if (grid_side < 2) bad("grid_side must be at least 2");
  if (T < 1) bad("T must be at least 1");
  if (burn_in < 0) bad("burn_in must be non-negative");
  if (n_reps < 0) bad("n_reps must be non-negative");
  if (!(truth.sigma2 > 0.0) || !std::isfinite(truth.sigma2)) bad("sigma2 must be positive");
  if (truth.beta.size() != 2) bad("the simulated design has k = 2 (intercept and one covariate)");
  if (family == InnovationFamily::kStudentT && !(df > 4.0)) {
    bad("student_t innovations need df > 4");
  }
}

SimulationDesign DefaultPreset(Index grid_side, Index t_len) {
  SimulationDesign d;
  d.grid_side = grid_side;
  d.T = t_len;
  d.truth.beta = {1.0, 0.5};
  d.truth.theta = {0.05, 0.7, -0.03};
  d.truth.sigma2 = 1.0;
  return d;
}

SimulationDesign LiteralPreset(Index grid_side, Index t_len) {
  SimulationDesign d = DefaultPreset(grid_side, t_len);
  d.truth.sigma2 = 0.1;
  return d;
}

std::vector<double> MakeDesignMatrix(Index n, Index t_len, std::uint64_t seed) {
  // Stream index far from the replication streams.
  Rng rng = MakeStream(seed, 0xd35a7c0ffeeULL);
  std::normal_distribution<double> z;
  std::vector<double> x(static_cast<std::size_t>(n * t_len * 2));
  for (Index t = 0; t < t_len; ++t) {
    double* ones = x.data() + (t * 2) * n;
    double* cov = x.data() + (t * 2 + 1) * n;
    for (Index i = 0; i < n; ++i) ones[i] = 1.0;
    for (Index i = 0; i < n; ++i) cov[i] = z(rng);
  }
  return x;
}

PanelData SimulatePanel(const SimulationDesign& design, const SpatialWeights& w,
                        const std::vector<double>& x, Rng& rng) {
  design.Validate();
  const Index n = design.N(), t_len = design.T;
  if (w.N() != n) throw Error(ErrorCode::kDimensionMismatch, "weights do not match the grid");
  if (static_cast<Index>(x.size()) != n * t_len * 2) {
    throw Error(ErrorCode::kDimensionMismatch, "design matrix has the wrong size");
  }
  const DependenceParams& th = design.truth.theta;
  if (const FeasibilityVerdict v = FeasibilityCheck(w, th); !v) {
    std::ostringstream os;
    os << "true theta is infeasible for this W:";
    for (const auto& label : v.violated) os << " [" << label << "]";
    throw Error(ErrorCode::kInfeasibleTheta, os.str());
  }

  const CholeskyFactor s_chol = BandedCholesky(BuildS(w, th.lambda));
  const BandedSymMatrix r = BuildR(w, th);
  const double sigma = std::sqrt(design.truth.sigma2);
  std::normal_distribution<double> gauss;
  std::student_t_distribution<double> student(design.df);
  const double t_scale = std::sqrt((design.df - 2.0) / design.df);
  auto draw = [&]() {
    if (design.family == InnovationFamily::kStudentT) return sigma * t_scale * student(rng);
    return sigma * gauss(rng);
  };

  // S U_t = R U_{t-1} + V_t, iterated in the internal order.
  std::vector<double> u(static_cast<std::size_t>(n), 0.0), e(u.size());
  std::vector<double> y(static_cast<std::size_t>(n * t_len));
  const auto fwd = w.permutation().forward();
  for (Index step = 0; step < design.burn_in + t_len; ++step) {
    BandSpmv(r, u, e);
    for (Index i = 0; i < n; ++i) e[i] += draw();
    s_chol.Solve(e);
    u.swap(e);
    const Index t = step - design.burn_in;
    if (t < 0) continue;
    double* yt = y.data() + t * n;
    for (Index i = 0; i < n; ++i) yt[fwd[i]] = u[i];
  }
  for (Index t = 0; t < t_len; ++t) {
    double* yt = y.data() + t * n;
    for (Index j = 0; j < 2; ++j) {
      const double* xj = x.data() + (t * 2 + j) * n;
      for (Index i = 0; i < n; ++i) yt[i] += xj[i] * design.truth.beta[j];
    }
  }
  return PanelData(n, t_len, 2, std::move(y), x);
}

PanelData SimulatePanel(const SimulationDesign& design) {
  design.Validate();
  const SpatialWeights w = MakeGridWeights(design.grid_side, design.order);
  const std::vector<double> x = MakeDesignMatrix(design.N(), design.T, design.seed);
  Rng rng = MakeStream(design.seed, 0);
  return SimulatePanel(design, w, x, rng);
}

MonteCarloSummary RunMonteCarlo(const SimulationDesign& design, const OptimizerConfig& fit_cfg,
                                const MonteCarloOptions& options) {
  design.Validate();
  return RunMonteCarlo(design, MakeGridWeights(design.grid_side, design.order), fit_cfg,
                       options);
}

MonteCarloSummary RunMonteCarlo(const SimulationDesign& design, const SpatialWeights& w,
                                const OptimizerConfig& fit_cfg,
                                const MonteCarloOptions& options) {
  design.Validate();
  MonteCarloSummary s;
  const std::size_t k = design.truth.beta.size();
  for (std::size_t j = 0; j < k; ++j) s.names.push_back("beta" + std::to_string(j));
  for (const char* name : {"lambda", "gamma", "rho", "sigma2"}) s.names.push_back(name);
  s.requested = design.n_reps;
  if (design.n_reps == 0) {
    s.empty = true;
    return s;
  }
  const double alpha = 1.0 - options.level;
  const double z = CriticalValue(alpha);
  const std::vector<double> x = MakeDesignMatrix(design.N(), design.T, design.seed);

  s.replications.resize(static_cast<std::size_t>(design.n_reps));
  ParallelFor(design.n_reps, options.threads, [&](Index rep) {
    ReplicationResult& r = s.replications[static_cast<std::size_t>(rep)];
    try {
      Rng rng = MakeStream(design.seed, static_cast<std::uint64_t>(rep));
      const PanelData panel = SimulatePanel(design, w, x, rng);
      const auto t0 = std::chrono::steady_clock::now();
      const FitResult fit = Fit(panel, w, fit_cfg);
      const SmallMatrix cov = BetaCovarianceFromGram(fit.gram, fit.params.sigma2);
      r.fit_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      r.estimates = fit.params.beta;
      for (double v : fit.params.theta.AsArray()) r.estimates.push_back(v);
      r.estimates.push_back(fit.params.sigma2);
      for (std::size_t j = 0; j < k; ++j) {
        r.beta_se.push_back(std::sqrt(cov(static_cast<Index>(j), static_cast<Index>(j))));
      }
      r.status = fit.diagnostics.status;
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });

  std::vector<double> truth = design.truth.beta;
  for (double v : design.truth.theta.AsArray()) truth.push_back(v);
  truth.push_back(design.truth.sigma2);

  const std::size_t p = truth.size();
  std::vector<double> sum(p, 0.0), sum_sq_err(p, 0.0), se_sum(k, 0.0), covered(k, 0.0);
  double seconds = 0.0;
  for (const ReplicationResult& r : s.replications) {
    if (!r.ok) {
      ++s.failed;
      continue;
    }
    ++s.succeeded;
    seconds += r.fit_seconds;
    for (std::size_t j = 0; j < p; ++j) {
      sum[j] += r.estimates[j];
      sum_sq_err[j] += (r.estimates[j] - truth[j]) * (r.estimates[j] - truth[j]);
    }
    for (std::size_t j = 0; j < k; ++j) {
      se_sum[j] += r.beta_se[j];
      if (std::abs(r.estimates[j] - truth[j]) <= z * r.beta_se[j]) covered[j] += 1.0;
    }
  }
  s.failure_flag = static_cast<double>(s.failed) > 0.01 * static_cast<double>(s.requested);
  if (s.succeeded == 0) return s;
  const double m = static_cast<double>(s.succeeded);
  s.mean_fit_seconds = seconds / m;
  for (std::size_t j = 0; j < p; ++j) {
    ParameterSummary ps;
    ps.name = s.names[j];
    ps.truth = truth[j];
    ps.mean = sum[j] / m;
    ps.bias = ps.mean - truth[j];
    ps.mse = sum_sq_err[j] / m;
    double ss = 0.0;
    for (const ReplicationResult& r : s.replications) {
      if (r.ok) ss += (r.estimates[j] - ps.mean) * (r.estimates[j] - ps.mean);
    }
    ps.sd = m > 1.0 ? std::sqrt(ss / (m - 1.0)) : 0.0;
    ps.bias_se = ps.sd / std::sqrt(m);
    if (j < k) {
      ps.mean_plugin_se = se_sum[j] / m;
      ps.coverage = covered[j] / m;
    }
    s.parameters.push_back(ps);
  }
  return s;
}

}  // namespace stqmle
