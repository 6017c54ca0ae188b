#include <benchmark/benchmark.h>

#include <numeric>
#include <random>
#include <vector>

#include "stqmle/likelihood.hpp"
#include "stqmle/model.hpp"
#include "stqmle/simulate.hpp"
#include "stqmle/sparse/cholesky.hpp"
#include "stqmle/sparse/lanczos.hpp"
#include "stqmle/sparse/permutation.hpp"

namespace {

using namespace stqmle;

// S(0.2)^2 on an RCM-ordered rook grid: SPD with twice the grid bandwidth.
BandedSymMatrix GridOperator(Index side) {
  const SpatialWeights w = MakeGridWeights(side);
  const BandedSymMatrix s = BuildS(w, 0.2);
  return BandProduct(s, s);
}

void BM_BandedCholesky(benchmark::State& state) {
  const BandedSymMatrix a = GridOperator(state.range(0));
  for (auto _ : state) {
    CholeskyFactor f = BandedCholesky(a);
    benchmark::DoNotOptimize(f.log_det());
  }
  state.SetComplexityN(a.dim());
}
BENCHMARK(BM_BandedCholesky)->Arg(25)->Arg(50)->Arg(100)->Complexity();

void BM_BandSpmv(benchmark::State& state) {
  const BandedSymMatrix a = GridOperator(state.range(0));
  std::vector<double> v(static_cast<std::size_t>(a.dim()), 1.0), out(v.size());
  for (auto _ : state) {
    BandSpmv(a, v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(a.dim());
}
BENCHMARK(BM_BandSpmv)->Arg(50)->Arg(100)->Arg(200)->Complexity();

void BM_RcmOrder(benchmark::State& state) {
  const Index side = state.range(0);
  const SymSparseMatrix g = GridAdjacency(side);
  std::vector<Index> shuffle(static_cast<std::size_t>(g.dim()));
  std::iota(shuffle.begin(), shuffle.end(), Index{0});
  std::mt19937_64 rng(7);
  std::shuffle(shuffle.begin(), shuffle.end(), rng);
  const SymSparseMatrix w = PermuteSparse(g, Permutation::FromForward(shuffle));
  for (auto _ : state) {
    Permutation p = RcmOrder(w);
    benchmark::DoNotOptimize(p.forward().data());
  }
  state.SetComplexityN(w.dim());
}
BENCHMARK(BM_RcmOrder)->Arg(50)->Arg(100)->Arg(200)->Complexity();

void BM_ExtremeEigenvalues(benchmark::State& state) {
  const SymSparseMatrix w = GridAdjacency(state.range(0));
  for (auto _ : state) {
    ExtremeEigenResult r = ExtremeEigenvalues(w);
    benchmark::DoNotOptimize(r.d_max);
  }
}
BENCHMARK(BM_ExtremeEigenvalues)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ConcentratedObjective(benchmark::State& state) {
  const Index side = state.range(0);
  const SimulationDesign design = DefaultPreset(side, 10);
  const SpatialWeights w = MakeGridWeights(side);
  const std::vector<double> x = MakeDesignMatrix(design.N(), design.T, design.seed);
  Rng rng = MakeStream(design.seed, 0);
  const PanelData aligned = SimulatePanel(design, w, x, rng).Permuted(w.permutation());
  ConcentratedObjective f(aligned, w);
  Index step = 0;
  for (auto _ : state) {
    // A fresh lambda each time so the log-det cache never hits.
    const double lambda = 0.05 + 1e-7 * static_cast<double>(++step % 100000);
    ConcentratedValue v = f.Evaluate({lambda, 0.7, -0.03});
    benchmark::DoNotOptimize(v.loglik);
  }
  state.SetComplexityN(w.N());
}
BENCHMARK(BM_ConcentratedObjective)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond)->Complexity();

}  // namespace

BENCHMARK_MAIN();
