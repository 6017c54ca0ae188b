#include "stqmle/model.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <sstream>

namespace stqmle {

std::string Checksum(const SymSparseMatrix& w) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::int64_t n = w.dim();
  mix(&n, sizeof n);
  mix(w.row_ptr().data(), w.row_ptr().size_bytes());
  mix(w.col_idx().data(), w.col_idx().size_bytes());
  mix(w.values().data(), w.values().size_bytes());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void CheckZeroDiagonal(const SymSparseMatrix& w) {
  for (Index i = 0; i < w.dim(); ++i) {
    if (w.at(i, i) != 0.0) {
      std::ostringstream os;
      os << "spatial weights must have a zero diagonal; W(" << i << ", " << i
         << ") = " << w.at(i, i);
      throw Error(ErrorCode::kInvalidArgument, os.str());
    }
  }
}

}  // namespace

SpatialWeights SpatialWeights::Build(SymSparseMatrix w, const WeightsOptions& options) {
  if (w.dim() < 1) throw Error(ErrorCode::kInvalidArgument, "empty weight matrix");
  CheckZeroDiagonal(w);
  SpatialWeights sw;
  sw.original_ = std::move(w);
  sw.permutation_ = options.reorder ? RcmOrder(sw.original_)
                                    : Permutation::Identity(sw.original_.dim());
  sw.Finish();
  sw.spectrum_ = ExtremeEigenvalues(sw.sparse_, options.lanczos);
  sw.d_min_ = sw.spectrum_.d_min;
  sw.d_max_ = sw.spectrum_.d_max;
  if (sw.original_.nnz() > 0) {
    if (!(sw.d_min_ < 0.0 && sw.d_max_ > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "extreme eigenvalues of a nonzero W do not have opposite signs");
    }
    if (sw.spectrum_.breakdown_dim >= 0 && sw.spectrum_.breakdown_dim <= 2) {
      sw.warnings_.push_back(
          "Krylov space of W closed at dimension <= 2: W may have at most two "
          "distinct eigenvalues, in which case the dependence parameters are not "
          "identifiable");
    }
  }
  return sw;
}

SpatialWeights SpatialWeights::FromCache(SymSparseMatrix w, const WeightsCache& cache) {
  CheckZeroDiagonal(w);
  if (cache.n != w.dim() || cache.checksum != Checksum(w)) {
    throw Error(ErrorCode::kInvalidArgument,
                "weights cache does not match the weight matrix (dimension or checksum)");
  }
  SpatialWeights sw;
  sw.original_ = std::move(w);
  sw.permutation_ = Permutation::FromForward(cache.permutation);
  sw.Finish();
  if (sw.banded_.bandwidth() != cache.bandwidth) {
    throw Error(ErrorCode::kInvalidArgument, "weights cache bandwidth mismatch");
  }
  sw.d_min_ = cache.d_min;
  sw.d_max_ = cache.d_max;
  sw.spectrum_.d_min = cache.d_min;
  sw.spectrum_.d_max = cache.d_max;
  return sw;
}

void SpatialWeights::Finish() {
  sparse_ = PermuteSparse(original_, permutation_);
  banded_ = ApplyPermutation(original_, permutation_);
}

WeightsCache SpatialWeights::cache() const {
  WeightsCache c;
  c.n = N();
  c.bandwidth = banded_.bandwidth();
  c.d_min = d_min_;
  c.d_max = d_max_;
  c.permutation.assign(permutation_.forward().begin(), permutation_.forward().end());
  c.checksum = Checksum(original_);
  return c;
}

PanelData::PanelData(Index n, Index t, Index k)
    : n_(n), t_(t), k_(k),
      y_(static_cast<std::size_t>(n * t), 0.0),
      x_(static_cast<std::size_t>(n * t * k), 0.0) {
  if (n < 1 || t < 1 || k < 0) {
    throw Error(ErrorCode::kInvalidArgument, "PanelData: need N >= 1, T >= 1, k >= 0");
  }
}

PanelData::PanelData(Index n, Index t, Index k, std::vector<double> y,
                     std::vector<double> x)
    : n_(n), t_(t), k_(k), y_(std::move(y)), x_(std::move(x)) {
  if (n < 1 || t < 1 || k < 0) {
    throw Error(ErrorCode::kInvalidArgument, "PanelData: need N >= 1, T >= 1, k >= 0");
  }
  if (static_cast<Index>(y_.size()) != n * t || static_cast<Index>(x_.size()) != n * t * k) {
    throw Error(ErrorCode::kDimensionMismatch, "PanelData: array sizes do not match N, T, k");
  }
  for (double v : y_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonfiniteValue, "PanelData: non-finite y");
  }
  for (double v : x_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonfiniteValue, "PanelData: non-finite x");
  }
}

PanelData PanelData::Permuted(const Permutation& p) const {
  if (p.size() != n_) throw Error(ErrorCode::kDimensionMismatch, "PanelData::Permuted");
  return RestrictCells(p.forward());
}

PanelData PanelData::Unpermuted(const Permutation& p) const {
  if (p.size() != n_) throw Error(ErrorCode::kDimensionMismatch, "PanelData::Unpermuted");
  return RestrictCells(p.inverse());
}

PanelData PanelData::RestrictCells(std::span<const Index> cells) const {
  const Index m = static_cast<Index>(cells.size());
  PanelData out(m, t_, k_);
  for (Index t = 0; t < t_; ++t) {
    auto src = y(t);
    auto dst = out.y(t);
    for (Index i = 0; i < m; ++i) dst[i] = src[cells[i]];
    for (Index j = 0; j < k_; ++j) {
      auto xs = x(t, j);
      auto xd = out.x(t, j);
      for (Index i = 0; i < m; ++i) xd[i] = xs[cells[i]];
    }
  }
  return out;
}

void CheckAligned(const PanelData& data, const SpatialWeights& w) {
  if (data.N() != w.N()) {
    std::ostringstream os;
    os << "panel has " << data.N() << " cells but W is " << w.N() << "x" << w.N();
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
}

BandedSymMatrix BuildS(const SpatialWeights& w, double lambda) {
  return BandShiftScale(1.0, -lambda, w.banded());
}

BandedSymMatrix BuildR(const SpatialWeights& w, const DependenceParams& theta) {
  return BandShiftScale(theta.gamma, theta.rho, w.banded());
}

BandedSymMatrix BuildG(const SpatialWeights& w, const DependenceParams& theta) {
  const BandedSymMatrix s = BuildS(w, theta.lambda);
  const BandedSymMatrix r = BuildR(w, theta);
  return BandAxpby(1.0, BandProduct(s, s), -1.0, BandProduct(r, r));
}

FeasibilityVerdict FeasibilityCheck(double d_min, double d_max,
                                    const DependenceParams& theta, double margin) {
  FeasibilityVerdict v;
  auto fail = [&v](const char* label) {
    v.feasible = false;
    v.violated.emplace_back(label);
  };
  const double lam = theta.lambda, gam = theta.gamma, rho = theta.rho;
  if (!(std::isfinite(lam) && std::isfinite(gam) && std::isfinite(rho))) {
    fail("finite");
    return v;
  }
  if (!(gam < 1.0 - margin)) fail("gamma < 1");
  if (!(gam > -1.0 + margin)) fail("gamma > -1");
  const double sum = lam + rho;
  const double diff = lam - rho;
  if (d_max > 0.0) {
    if (!(sum < (1.0 - gam) / d_max - margin)) fail("lambda + rho < (1 - gamma) / d_max");
    if (!(diff < (1.0 + gam) / d_max - margin)) fail("lambda - rho < (1 + gamma) / d_max");
  }
  if (d_min < 0.0) {
    if (!(sum > (1.0 - gam) / d_min + margin)) fail("lambda + rho > (1 - gamma) / d_min");
    if (!(diff > (1.0 + gam) / d_min + margin)) fail("lambda - rho > (1 + gamma) / d_min");
  }
  return v;
}

std::array<HalfSpace, 6> PolytopeConstraints(double d_min, double d_max) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::array<HalfSpace, 6> h;
  h[0] = {{0.0, 1.0, 0.0}, 1.0, "gamma < 1"};
  h[1] = {{0.0, -1.0, 0.0}, 1.0, "gamma > -1"};
  if (d_max > 0.0) {
    h[2] = {{1.0, 1.0 / d_max, 1.0}, 1.0 / d_max, "lambda + rho < (1 - gamma) / d_max"};
    h[3] = {{1.0, -1.0 / d_max, -1.0}, 1.0 / d_max, "lambda - rho < (1 + gamma) / d_max"};
  } else {
    h[2] = {{0.0, 0.0, 0.0}, kInf, "lambda + rho < (1 - gamma) / d_max"};
    h[3] = {{0.0, 0.0, 0.0}, kInf, "lambda - rho < (1 + gamma) / d_max"};
  }
  if (d_min < 0.0) {
    h[4] = {{-1.0, -1.0 / d_min, -1.0}, -1.0 / d_min, "lambda + rho > (1 - gamma) / d_min"};
    h[5] = {{-1.0, 1.0 / d_min, 1.0}, -1.0 / d_min, "lambda - rho > (1 + gamma) / d_min"};
  } else {
    h[4] = {{0.0, 0.0, 0.0}, kInf, "lambda + rho > (1 - gamma) / d_min"};
    h[5] = {{0.0, 0.0, 0.0}, kInf, "lambda - rho > (1 + gamma) / d_min"};
  }
  return h;
}

}  // namespace stqmle
