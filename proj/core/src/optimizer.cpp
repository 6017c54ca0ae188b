#include "stqmle/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace stqmle {

void OptimizerConfig::Validate() const {
  if (max_iters < 1) throw Error(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
  if (!(grad_tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "grad_tol must be > 0");
  if (!(step_tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "step_tol must be > 0");
}

const char* ToString(FitStatus status) {
  switch (status) {
    case FitStatus::kConverged: return "converged";
    case FitStatus::kStepTolerance: return "step_tolerance";
    case FitStatus::kMaxIters: return "max_iters";
  }
  return "unknown";
}

LineSearchResult LineSearchFeasible(
    const std::function<double(const std::vector<double>&)>& f,
    const std::function<bool(const std::vector<double>&)>& feasible,
    const std::vector<double>& x, const std::vector<double>& direction, double f0,
    double slope, const LineSearchOptions& options) {
  if (!(slope > 0.0)) {
    std::ostringstream os;
    os << "search direction is not an ascent direction (g'd = " << slope << ")";
    throw Error(ErrorCode::kNoAscent, os.str());
  }
  LineSearchResult r;
  std::vector<double> trial(x.size());
  double alpha = 1.0;
  for (int k = 0; k <= options.max_backtracks; ++k, alpha *= options.shrink) {
    r.backtracks = k;
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + alpha * direction[i];
    if (!feasible(trial)) {
      ++r.infeasible_trials;
      continue;
    }
    double value;
    try {
      value = f(trial);
    } catch (const Error& e) {
      // A factorisation can still fail within round-off of the boundary.
      if (e.code() != ErrorCode::kNotPositiveDefinite && e.code() != ErrorCode::kNonfiniteValue) {
        throw;
      }
      ++r.infeasible_trials;
      continue;
    }
    if (value >= f0 + options.c1 * alpha * slope) {
      r.accepted = true;
      r.alpha = alpha;
      r.value = value;
      return r;
    }
  }
  return r;
}

namespace {

using Vec = std::vector<double>;

double Dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double InfNorm(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

DependenceParams ThetaOf(const Vec& x) { return {x[0], x[1], x[2]}; }

// Maximisation problem in per-observation units.
struct Problem {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<bool(const Vec&)> feasible;
};

struct RunResult {
  Vec x;
  double fx = 0.0;
  FitDiagnostics diag;
};

RunResult Bfgs(const Problem& p, Vec x, const OptimizerConfig& cfg, double nt) {
  const std::size_t n = x.size();
  RunResult out;
  FitDiagnostics& d = out.diag;
  double fx = p.value(x);
  Vec g = p.gradient(x);
  d.loglik_trace.push_back(fx * nt);

  // Inverse Hessian of -f, row-major.
  auto identity = [n] {
    Vec h(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;
    return h;
  };
  Vec h = identity();
  bool h_is_identity = true;
  bool scaled = false;

  d.status = FitStatus::kMaxIters;
  for (;;) {
    d.grad_norm = InfNorm(g);
    if (d.grad_norm <= cfg.grad_tol * (1.0 + std::abs(fx))) {
      d.status = FitStatus::kConverged;
      break;
    }
    if (d.iterations >= cfg.max_iters) break;

    Vec dir(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) dir[i] += h[i * n + j] * g[j];
    }
    double slope = Dot(g, dir);
    if (!(slope > 0.0)) {
      h = identity();
      h_is_identity = true;
      scaled = false;
      ++d.hessian_resets;
      dir = g;
      slope = Dot(g, g);
    }
    const LineSearchResult ls = LineSearchFeasible(p.value, p.feasible, x, dir, fx, slope);
    d.boundary_hits += ls.infeasible_trials;
    ++d.iterations;
    if (!ls.accepted) {
      if (!h_is_identity) {
        h = identity();
        h_is_identity = true;
        scaled = false;
        ++d.hessian_resets;
        continue;
      }
      d.status = FitStatus::kStepTolerance;
      break;
    }
    Vec s(n), x_new(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = ls.alpha * dir[i];
      x_new[i] = x[i] + s[i];
    }
    const Vec g_new = p.gradient(x_new);
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = g[i] - g_new[i];
    const double sy = Dot(s, y);
    const double yy = Dot(y, y);
    if (sy > 1e-12 * std::sqrt(Dot(s, s) * yy)) {
      if (!scaled) {
        h = identity();
        for (std::size_t i = 0; i < n; ++i) h[i * n + i] = sy / yy;
        scaled = true;
      }
      // H <- (I - r s y') H (I - r y s') + r s s'.
      const double r = 1.0 / sy;
      Vec hy(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) hy[i] += h[i * n + j] * y[j];
      }
      const double yhy = Dot(y, hy);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          h[i * n + j] += -r * (s[i] * hy[j] + hy[i] * s[j]) + (r * r * yhy + r) * s[i] * s[j];
        }
      }
      h_is_identity = false;
    } else {
      h = identity();
      h_is_identity = true;
      scaled = false;
      ++d.hessian_resets;
    }
    x = x_new;
    fx = ls.value;
    g = g_new;
    d.loglik_trace.push_back(fx * nt);
    if (InfNorm(s) < cfg.step_tol) {
      d.grad_norm = InfNorm(g);
      d.status = d.grad_norm <= cfg.grad_tol * (1.0 + std::abs(fx)) ? FitStatus::kConverged
                                                                    : FitStatus::kStepTolerance;
      break;
    }
  }
  out.x = std::move(x);
  out.fx = fx;
  return out;
}

// Central differences in the first three coordinates, with the step halved
// until both stencil points are feasible.
void FdTheta(const Problem& p, const Vec& x, Vec& grad) {
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  for (std::size_t i = 0; i < 3; ++i) {
    double h = base * (1.0 + std::abs(x[i]));
    Vec plus = x, minus = x;
    bool ok = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      plus[i] = x[i] + h;
      minus[i] = x[i] - h;
      if (p.feasible(plus) && p.feasible(minus)) {
        ok = true;
        break;
      }
      h *= 0.5;
    }
    if (!ok) {
      throw Error(ErrorCode::kInfeasibleTheta,
                  "no feasible finite-difference step (theta too close to the boundary)");
    }
    grad[i] = (p.value(plus) - p.value(minus)) / (plus[i] - minus[i]);
  }
}

std::vector<DependenceParams> StartingPoints(const SpatialWeights& w,
                                             const OptimizerConfig& cfg) {
  std::vector<DependenceParams> starts{cfg.initial_theta};
  if (!cfg.multistart) return starts;
  std::vector<DependenceParams> lattice{{0.0, 0.5, 0.0}, {0.0, -0.5, 0.0}};
  if (w.d_max() > 0.0) lattice.push_back({0.5 / w.d_max(), 0.0, 0.0});
  if (w.d_min() < 0.0) lattice.push_back({0.5 / w.d_min(), 0.0, 0.0});
  for (const auto& th : lattice) {
    if (FeasibilityCheck(w, th)) starts.push_back(th);
  }
  return starts;
}

double Seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

}  // namespace

FitResult FitAligned(const PanelData& aligned, const SpatialWeights& w,
                     const OptimizerConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  cfg.Validate();
  CheckAligned(aligned, w);
  if (const FeasibilityVerdict v = FeasibilityCheck(w, cfg.initial_theta); !v) {
    std::ostringstream os;
    os << "initial theta is infeasible:";
    for (const auto& label : v.violated) os << " [" << label << "]";
    throw Error(ErrorCode::kInfeasibleTheta, os.str());
  }
  ConcentratedObjective obj(aligned, w);
  const auto t1 = std::chrono::steady_clock::now();
  const double nt = static_cast<double>(obj.NT());
  const Index k = obj.k();

  Problem p;
  p.feasible = [&w](const Vec& x) { return static_cast<bool>(FeasibilityCheck(w, ThetaOf(x))); };
  if (cfg.profile_beta) {
    p.value = [&obj, nt](const Vec& x) { return obj.Evaluate(ThetaOf(x)).loglik / nt; };
    p.gradient = [&p](const Vec& x) {
      Vec g(3);
      FdTheta(p, x, g);
      return g;
    };
  } else {
    p.value = [&obj, nt](const Vec& x) {
      return obj.EvaluateAtBeta(ThetaOf(x), std::span<const double>(x).subspan(3)).loglik / nt;
    };
    p.gradient = [&p, &obj, k](const Vec& x) {
      Vec g(x.size());
      FdTheta(p, x, g);
      // Closed form in beta: (X'P y - X'P X beta) / H with sigma2 profiled.
      const SmallMatrix q = obj.Gram(ThetaOf(x));
      std::vector<double> v(static_cast<std::size_t>(k + 1));
      v[0] = 1.0;
      for (Index j = 0; j < k; ++j) v[j + 1] = -x[3 + j];
      double h = 0.0;
      for (Index a = 0; a <= k; ++a) {
        for (Index b = 0; b <= k; ++b) h += v[a] * q(a, b) * v[b];
      }
      for (Index j = 0; j < k; ++j) {
        double r = 0.0;
        for (Index b = 0; b <= k; ++b) r += q(j + 1, b) * v[b];
        g[3 + j] = r / h;
      }
      return g;
    };
  }

  RunResult best;
  bool have_best = false;
  int starts = 0;
  for (const DependenceParams& start : StartingPoints(w, cfg)) {
    Vec x0{start.lambda, start.gamma, start.rho};
    if (!cfg.profile_beta) {
      const ConcentratedValue cv = obj.Evaluate(start);
      x0.insert(x0.end(), cv.beta_hat.begin(), cv.beta_hat.end());
    }
    RunResult r = Bfgs(p, std::move(x0), cfg, nt);
    ++starts;
    if (!have_best || r.fx > best.fx) {
      best = std::move(r);
      have_best = true;
    }
  }
  const auto t2 = std::chrono::steady_clock::now();

  FitResult out;
  const DependenceParams theta = ThetaOf(best.x);
  out.params.theta = theta;
  if (cfg.profile_beta) {
    const ConcentratedValue cv = obj.Evaluate(theta);
    out.params.beta = cv.beta_hat;
    out.params.sigma2 = cv.sigma2_hat;
    out.loglik = cv.loglik;
    out.logdet_K = cv.logdet_K;
    out.logdet_S_abs = cv.logdet_S_abs;
  } else {
    out.params.beta.assign(best.x.begin() + 3, best.x.end());
    const LikelihoodValue lv = obj.EvaluateAtBeta(theta, out.params.beta);
    out.params.sigma2 = lv.sigma2_hat;
    out.loglik = lv.loglik;
    out.logdet_K = lv.logdet_K;
    out.logdet_S_abs = lv.logdet_S_abs;
  }
  out.gram = obj.Gram(theta);
  out.diagnostics = std::move(best.diag);
  out.diagnostics.starts = starts;
  out.diagnostics.evaluations = obj.evaluations();
  const auto t3 = std::chrono::steady_clock::now();
  out.diagnostics.setup_seconds = Seconds(t0, t1);
  out.diagnostics.optimize_seconds = Seconds(t1, t2);
  out.diagnostics.total_seconds = Seconds(t0, t3);
  return out;
}

FitResult Fit(const PanelData& data, const SpatialWeights& w, const OptimizerConfig& cfg) {
  CheckAligned(data, w);
  return FitAligned(data.Permuted(w.permutation()), w, cfg);
}

}  // namespace stqmle
