// Acceptance suite: one PASS/FAIL line per criterion. Tolerances, reference
// values and seeds are fixed here.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <array>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "alloc_tracking.hpp"
#include "cli.hpp"
#include "dense_oracle.hpp"
#include "test_support.hpp"
#include "stqmle/likelihood.hpp"
#include "stqmle/parallel.hpp"
#include "stqmle/simulate.hpp"
#include "stqmle/sparse/cholesky.hpp"
#include "stqmle/sparse/lanczos.hpp"
#include "stqmle/sparse/permutation.hpp"

using namespace stqmle;
using testing_support::RandomPanel;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

int g_threads = 0;

// ---- shared helpers ---------------------------------------------------------

SymSparseMatrix Shuffled(const SymSparseMatrix& w, std::uint64_t seed) {
  std::vector<Index> p(static_cast<std::size_t>(w.dim()));
  std::iota(p.begin(), p.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(p.begin(), p.end(), rng);
  return PermuteSparse(w, Permutation::FromForward(p));
}

// Monte Carlo runs are shared between criteria within one process.
const MonteCarloSummary& Study(Index side, Index t_len, Index reps) {
  static std::map<std::array<Index, 3>, MonteCarloSummary> cache;
  const std::array<Index, 3> key{side, t_len, reps};
  auto it = cache.find(key);
  if (it == cache.end()) {
    SimulationDesign d = DefaultPreset(side, t_len);
    d.n_reps = reps;
    d.seed = 20240101 + static_cast<std::uint64_t>(side * 1000 + t_len);
    const auto t0 = Clock::now();
    MonteCarloSummary s = RunMonteCarlo(d, OptimizerConfig{}, {.threads = g_threads, .level = 0.95});
    std::cerr << "[study] N=" << side * side << " T=" << t_len << " reps=" << reps << " in "
              << Fmt(Seconds(t0)) << " s (" << s.failed << " failed)\n";
    it = cache.emplace(key, std::move(s)).first;
  }
  return it->second;
}

const ParameterSummary& Param(const MonteCarloSummary& s, const std::string& name) {
  for (const auto& p : s.parameters) {
    if (p.name == name) return p;
  }
  throw Error(ErrorCode::kInvalidArgument, "no parameter " + name);
}

// ---- criteria ---------------------------------------------------------------

// Banded likelihood against the dense oracle.
Outcome Criterion1() {
  constexpr double kTol = 1e-8;
  constexpr double kBudget = 60.0;
  const auto t0 = Clock::now();
  double worst = 0.0;
  int checked = 0;
  std::mt19937_64 rng(101);
  for (Index side : {3, 4, 5}) {
    const SpatialWeights w = SpatialWeights::Build(testing_support::RookGrid(side));
    const Eigen::MatrixXd dw = oracle::DenseW(w.original());
    for (Index t_len : {1, 2, 4}) {
      const PanelData d = RandomPanel(side * side, t_len, 2, 1000 + side * 10 + t_len);
      const PanelData a = d.Permuted(w.permutation());
      for (int rep = 0; rep < 100; ++rep) {
        const ModelParams p{{0.8, -0.3}, testing_support::RandomFeasibleTheta(w.d_min(), w.d_max(), rng, 0.95), 1.2};
        const double banded = QuasiLoglik(a, p, w).loglik;
        const double dense = oracle::DenseLoglik(d, p, dw);
        worst = std::max(worst, std::abs(banded - dense) / std::abs(dense));
        ++checked;
      }
    }
  }
  const double secs = Seconds(t0);
  return {worst <= kTol && secs < kBudget,
          std::to_string(checked) + " evaluations, max relative error " + Fmt(worst) + " (tol " +
              Fmt(kTol) + "), " + Fmt(secs) + " s (budget " + Fmt(kBudget) + " s)"};
}

// Closed-form beta gradient against central differences.
Outcome Criterion2() {
  constexpr double kTol = 1e-6;
  constexpr double kBudget = 30.0;
  const auto t0 = Clock::now();
  const SpatialWeights w = MakeGridWeights(10);
  const PanelData a = RandomPanel(100, 5, 3, 202).Permuted(w.permutation());
  std::mt19937_64 rng(203);
  std::normal_distribution<double> z;
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    ModelParams p{{z(rng), z(rng), z(rng)}, testing_support::RandomFeasibleTheta(w.d_min(), w.d_max(), rng, 0.95), 0.5 + std::abs(z(rng))};
    LikelihoodWorkspace ws(w);
    ws.Update(p.theta);
    const std::vector<double> g = GradientBeta(a, p, ws);
    for (std::size_t j = 0; j < 3; ++j) {
      const double h = 1e-6 * (1.0 + std::abs(p.beta[j]));
      ModelParams up = p, dn = p;
      up.beta[j] += h;
      dn.beta[j] -= h;
      const double fd = (QuasiLoglik(a, up, ws).loglik - QuasiLoglik(a, dn, ws).loglik) / (2 * h);
      worst = std::max(worst, std::abs(g[j] - fd) / std::max(1.0, std::abs(fd)));
    }
  }
  const double secs = Seconds(t0);
  return {worst <= kTol && secs < kBudget,
          "max relative error " + Fmt(worst) + " (tol " + Fmt(kTol) + ") over 20 points, " +
              Fmt(secs) + " s"};
}

// Bias of every component within 3 Monte Carlo standard errors.
Outcome Criterion3() {
  constexpr double kSe = 3.0;
  constexpr double kBudget = 30.0 * 60.0;
  const auto t0 = Clock::now();
  const MonteCarloSummary& s = Study(50, 20, 300);
  const double secs = Seconds(t0);
  bool ok = s.succeeded == 300 && secs < kBudget;
  std::ostringstream os;
  for (const auto& p : s.parameters) {
    const double z = p.bias / p.bias_se;
    ok = ok && std::abs(z) <= kSe;
    os << p.name << " bias " << Fmt(p.bias) << " (" << Fmt(z, 3) << " SE); ";
  }
  os << s.succeeded << "/300 fits, " << Fmt(secs) << " s";
  return {ok, os.str()};
}

// Sample MSE of beta within a factor 2 of the reference values.
Outcome Criterion4() {
  struct Row {
    Index side, t_len;
    double mse_b0, mse_b1;
  };
  const Row rows[] = {{10, 5, 68.32e-4, 16.42e-4}, {20, 10, 8.68e-4, 2.09e-4}};
  bool ok = true;
  std::ostringstream os;
  for (const Row& r : rows) {
    const MonteCarloSummary& s = Study(r.side, r.t_len, 500);
    const double q0 = Param(s, "beta0").mse / r.mse_b0;
    const double q1 = Param(s, "beta1").mse / r.mse_b1;
    const bool row_ok = q0 >= 0.5 && q0 <= 2.0 && q1 >= 0.5 && q1 <= 2.0 && s.succeeded == 500;
    ok = ok && row_ok;
    os << "N=" << r.side * r.side << ",T=" << r.t_len << ": MSE(beta0) "
       << Fmt(Param(s, "beta0").mse) << " ratio " << Fmt(q0, 3) << ", MSE(beta1) "
       << Fmt(Param(s, "beta1").mse) << " ratio " << Fmt(q1, 3) << "; ";
  }
  os << "allowed ratio [0.5, 2]";
  return {ok, os.str()};
}

// Mean plug-in SE of beta0 against the reference value and the run's own SD.
Outcome Criterion5() {
  constexpr double kReference = 7.907e-2;
  const MonteCarloSummary& s = Study(10, 5, 500);
  const ParameterSummary& b0 = Param(s, "beta0");
  const double vs_pub = std::abs(b0.mean_plugin_se - kReference) / kReference;
  const double vs_sd = std::abs(b0.mean_plugin_se - b0.sd) / b0.sd;
  return {vs_pub <= 0.15 && vs_sd <= 0.10,
          "mean plug-in SE " + Fmt(b0.mean_plugin_se) + " vs reference " + Fmt(kReference) +
              " (off " + Fmt(100 * vs_pub, 3) + "%, tol 15%), vs sample SD " + Fmt(b0.sd) +
              " (off " + Fmt(100 * vs_sd, 3) + "%, tol 10%)"};
}

// 95% interval coverage for beta.
Outcome Criterion6() {
  bool ok = true;
  std::ostringstream os;
  for (const auto& [side, t_len] : {std::pair<Index, Index>{10, 5}, {20, 10}}) {
    const MonteCarloSummary& s = Study(side, t_len, 500);
    for (const char* name : {"beta0", "beta1"}) {
      const double c = 100.0 * Param(s, name).coverage;
      ok = ok && c >= 92.5 && c <= 97.5;
      os << "N=" << side * side << ",T=" << t_len << " " << name << " " << Fmt(c, 4) << "%; ";
    }
  }
  os << "allowed [92.5, 97.5]";
  return {ok, os.str()};
}

// beta1 and theta estimates are nearly uncorrelated.
Outcome Criterion7() {
  constexpr double kMaxCorr = 0.15;
  const MonteCarloSummary& s = Study(50, 10, 300);
  std::vector<double> b1, th[3];
  for (const auto& r : s.replications) {
    if (!r.ok) continue;
    b1.push_back(r.estimates[1]);
    for (int j = 0; j < 3; ++j) th[j].push_back(r.estimates[2 + j]);
  }
  auto corr = [](const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      sab += (a[i] - ma) * (b[i] - mb);
      saa += (a[i] - ma) * (a[i] - ma);
      sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
  };
  bool ok = b1.size() == 300;
  std::ostringstream os;
  const char* names[] = {"lambda", "gamma", "rho"};
  for (int j = 0; j < 3; ++j) {
    const double c = corr(b1, th[j]);
    ok = ok && std::abs(c) <= kMaxCorr;
    os << "corr(beta1, " << names[j] << ") " << Fmt(c, 3) << "; ";
  }
  os << "limit " << kMaxCorr << ", " << b1.size() << " replications";
  return {ok, os.str()};
}

// Fit time scaling and peak memory.
Outcome Criterion8() {
  constexpr double kSlopeLo = 0.8, kSlopeHi = 1.3;
  constexpr double kMemLimit = 1024.0 * 1024.0 * 1024.0;
  std::vector<double> ns, times;
  std::ostringstream os;
  std::size_t peak = 0, rss = 0;
  for (Index side : {50, 100, 200}) {
    const cli::BenchPoint p = cli::RunBenchPoint(side, 10, 3, 808);
    ns.push_back(static_cast<double>(p.N));
    times.push_back(p.median_fit_seconds);
    os << "N=" << p.N << " median fit " << Fmt(p.median_fit_seconds) << " s (b=" << p.bandwidth
       << "); ";
    std::cerr << "[bench] N=" << p.N << " median " << p.median_fit_seconds << " s, peak heap "
              << p.peak_heap_bytes << " B\n";
    peak = p.peak_heap_bytes;
    rss = p.rss_high_water_bytes;
  }
  const double slope = cli::LogLogSlope(ns, times).value_or(NAN);
  const bool slope_ok = slope >= kSlopeLo && slope <= kSlopeHi;
  const bool mem_ok = static_cast<double>(peak) < kMemLimit && static_cast<double>(rss) < kMemLimit;
  os << "slope " << Fmt(slope, 3) << " (allowed [" << kSlopeLo << ", " << kSlopeHi << "]) "
     << (slope_ok ? "ok" : "out of range") << "; peak heap at N=40000 " << Fmt(peak / 1048576.0)
     << " MiB, RSS high water " << Fmt(rss / 1048576.0) << " MiB (limit 1024 MiB) "
     << (mem_ok ? "ok" : "exceeded");
  return {slope_ok && mem_ok, os.str()};
}

// Kernel suite: RCM, Lanczos and banded Cholesky.
Outcome Criterion9() {
  bool ok = true;
  std::ostringstream os;

  double worst_ratio = 0.0;
  for (Index n : {10, 30}) {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
      const SymSparseMatrix w = Shuffled(testing_support::RookGrid(n), seed * 7919 + n);
      const Index bw = ApplyPermutation(w, RcmOrder(w)).bandwidth();
      worst_ratio = std::max(worst_ratio, static_cast<double>(bw) / static_cast<double>(n));
    }
  }
  ok = ok && worst_ratio <= 2.0;
  os << "RCM worst bandwidth / n " << Fmt(worst_ratio, 3) << " on shuffled grids (limit 2); ";

  double lanczos_err = 0.0;
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (Index n : {5, 10, 15, 20}) {
    std::vector<Triplet> t = testing_support::RookGrid(n).UpperTriplets();
    for (Triplet& e : t) e.value = u(rng);
    for (const SymSparseMatrix& w :
         {Shuffled(testing_support::RookGrid(n), n), Shuffled(SymSparseMatrix::FromTriangle(n * n, t), n + 1)}) {
      const ExtremeEigenResult r = ExtremeEigenvalues(w);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::DenseW(w));
      lanczos_err = std::max({lanczos_err, std::abs(r.d_min - es.eigenvalues().minCoeff()),
                              std::abs(r.d_max - es.eigenvalues().maxCoeff())});
    }
  }
  ok = ok && lanczos_err <= 1e-8;
  os << "Lanczos vs dense max error " << Fmt(lanczos_err) << " (tol 1e-8); ";

  // The grid value is checked against 4 cos(pi / 11) = 3.8379719; the
  // five-digit figure 3.83717 quoted for it differs from that by 8e-4.
  const double analytic = 4.0 * std::cos(std::numbers::pi / 11.0);
  const ExtremeEigenResult g = ExtremeEigenvalues(testing_support::RookGrid(10));
  const double grid_err = std::max(std::abs(g.d_max - analytic), std::abs(g.d_min + analytic));
  ok = ok && grid_err <= 1e-5;
  os << "grid n=10 d_max " << Fmt(g.d_max, 10) << " vs 4cos(pi/11) " << Fmt(analytic, 10)
     << " (err " << Fmt(grid_err) << ", tol 1e-5; quoted 3.83717 is off by "
     << Fmt(analytic - 3.83717, 3) << "); ";

  double chol_err = 0.0;
  std::mt19937_64 crng(910);
  std::uniform_real_distribution<double> cu(-1.0, 1.0);
  for (Index n : {10, 50, 100, 200}) {
    for (Index b : {1, 4, 12}) {
      BandedSymMatrix a(n, b);
      for (Index j = 0; j < n; ++j) {
        for (Index i = j + 1; i <= std::min(n - 1, j + b); ++i) a.lower(i, j) = cu(crng);
        a.lower(j, j) = 2.0 * static_cast<double>(b) + 1.0 + cu(crng);
      }
      const std::vector<double> dense = a.ToDense();
      const Eigen::Map<const Eigen::MatrixXd> m(dense.data(), n, n);
      const double ref = m.ldlt().vectorD().array().log().sum();
      const double got = BandedCholesky(a).log_det();
      chol_err = std::max(chol_err, std::abs(got - ref) / std::max(1.0, std::abs(ref)));
    }
  }
  ok = ok && chol_err <= 1e-8;
  os << "Cholesky log-det vs dense max relative error " << Fmt(chol_err) << " (tol 1e-8)";
  return {ok, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::vector<int> which;
  app.add_option("--criterion,-c", which, "Criteria to run (default: all)")
      ->check(CLI::Range(1, 9));
  app.add_option("--threads", g_threads, "Worker threads for Monte Carlo studies (0: all cores)");
  CLI11_PARSE(app, argc, argv);
  if (g_threads < 1) g_threads = HardwareThreads();
  if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  const std::function<Outcome()> criteria[] = {Criterion1, Criterion2, Criterion3,
                                               Criterion4, Criterion5, Criterion6,
                                               Criterion7, Criterion8, Criterion9};
  int failed = 0;
  for (int c : which) {
    Outcome o;
    try {
      o = criteria[c - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::cout << "criterion " << c << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail
              << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
