#include "stqmle/sparse/lanczos.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "stqmle/rng.hpp"

namespace stqmle {

namespace {

using Apply = std::function<void(std::span<const double>, std::span<double>)>;

struct RunResult {
  double value = 0.0;
  double residual = 0.0;
  int restarts = 0;
  int matvecs = 0;
  int breakdown_dim = -1;
};

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Largest algebraic eigenvalue of sign * A.
RunResult LargestEigenvalue(Index n, const Apply& apply, double sign,
                            std::vector<double> start, const LanczosOptions& opt) {
  const int m = static_cast<int>(std::min<Index>(std::max(opt.restart_dim, 2), n));
  const int keep_max = std::max(1, m / 2);
  const std::size_t un = static_cast<std::size_t>(n);
  std::vector<std::vector<double>> basis(static_cast<std::size_t>(m) + 1,
                                         std::vector<double>(un));
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  std::vector<double> w(un);

  {
    const double nrm = std::sqrt(Dot(start, start));
    for (std::size_t i = 0; i < un; ++i) basis[0][i] = start[i] / nrm;
  }

  RunResult res;
  int kept = 0;
  double best = -std::numeric_limits<double>::infinity();
  double best_residual = std::numeric_limits<double>::infinity();
  double op_norm = 0.0;

  for (res.restarts = 0; res.restarts <= opt.max_restarts; ++res.restarts) {
    int size = m;
    double beta = 0.0;
    bool breakdown = false;
    for (int j = kept; j < m; ++j) {
      apply(basis[j], w);
      ++res.matvecs;
      if (sign < 0) {
        for (double& x : w) x = -x;
      }
      // Two passes of classical Gram-Schmidt against the whole basis.
      std::vector<double> coef(static_cast<std::size_t>(j) + 1, 0.0);
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          const double c = Dot(basis[i], w);
          coef[i] += c;
          const auto& v = basis[i];
          for (std::size_t r = 0; r < un; ++r) w[r] -= c * v[r];
        }
      }
      for (int i = 0; i <= j; ++i) {
        // Entries above the arrow/tridiagonal structure are round-off.
        if (i < kept || i >= j - 1) {
          h(i, j) = coef[i];
          h(j, i) = coef[i];
        }
      }
      op_norm = std::max(op_norm, std::abs(coef[j]));
      beta = std::sqrt(Dot(w, w));
      op_norm = std::max(op_norm, beta);
      if (beta <= 1e-12 * std::max(op_norm, 1e-300) || beta == 0.0) {
        breakdown = true;
        size = j + 1;
        break;
      }
      for (std::size_t r = 0; r < un; ++r) basis[j + 1][r] = w[r] / beta;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h.topLeftCorner(size, size));
    const Eigen::VectorXd& theta = eig.eigenvalues();  // ascending
    const Eigen::MatrixXd& y = eig.eigenvectors();
    const int top = size - 1;
    const double residual = breakdown ? 0.0 : std::abs(beta * y(size - 1, top));
    if (theta(top) > best || residual < best_residual) {
      best = std::max(best, theta(top));
      best_residual = std::min(best_residual, residual);
    }
    if (breakdown) {
      res.breakdown_dim = size;
    }
    if (breakdown || residual <= opt.tol) {
      res.value = theta(top);
      res.residual = residual;
      return res;
    }

    // Thick restart: keep the leading Ritz vectors and the residual direction.
    kept = std::min(keep_max, size - 1);
    std::vector<std::vector<double>> ritz(static_cast<std::size_t>(kept),
                                          std::vector<double>(un, 0.0));
    for (int q = 0; q < kept; ++q) {
      const int col = top - q;
      auto& out = ritz[q];
      for (int i = 0; i < size; ++i) {
        const double c = y(i, col);
        const auto& v = basis[i];
        for (std::size_t r = 0; r < un; ++r) out[r] += c * v[r];
      }
    }
    basis[kept] = basis[size];
    for (int q = 0; q < kept; ++q) basis[q] = std::move(ritz[q]);
    h.setZero();
    for (int q = 0; q < kept; ++q) h(q, q) = theta(top - q);
  }
  throw NoConvergence("Lanczos did not converge within the restart limit",
                      sign < 0 ? -best : best, sign < 0 ? -best : best,
                      best_residual, best_residual);
}

}  // namespace

ExtremeEigenResult ExtremeEigenvalues(Index n, const Apply& apply,
                                      const LanczosOptions& options) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "ExtremeEigenvalues: empty matrix");
  ExtremeEigenResult out;
  out.seed = options.seed;
  std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  std::vector<double> random(static_cast<std::size_t>(n));
  {
    Rng rng(options.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& x : random) x = u(rng);
  }

  auto note = [&](const RunResult& r) {
    out.restarts += r.restarts;
    out.matvecs += r.matvecs;
    if (r.breakdown_dim >= 0 &&
        (out.breakdown_dim < 0 || r.breakdown_dim < out.breakdown_dim)) {
      out.breakdown_dim = r.breakdown_dim;
    }
  };

  auto extreme = [&](double sign, double& value, double& residual) {
    RunResult a, b;
    try {
      a = LargestEigenvalue(n, apply, sign, ones, options);
      b = LargestEigenvalue(n, apply, sign, random, options);
    } catch (const NoConvergence& e) {
      throw NoConvergence(e.what(), sign < 0 ? e.d_min() : 0.0,
                          sign > 0 ? e.d_max() : 0.0, e.residual_min(),
                          e.residual_max());
    }
    note(a);
    note(b);
    const RunResult& win = (b.value > a.value) ? b : a;
    value = sign * win.value;
    residual = win.residual;
  };

  extreme(+1.0, out.d_max, out.residual_max);
  extreme(-1.0, out.d_min, out.residual_min);
  return out;
}

ExtremeEigenResult ExtremeEigenvalues(const SymSparseMatrix& w,
                                      const LanczosOptions& options) {
  return ExtremeEigenvalues(
      w.dim(),
      [&w](std::span<const double> v, std::span<double> out) { w.Multiply(v, out); },
      options);
}

}  // namespace stqmle
