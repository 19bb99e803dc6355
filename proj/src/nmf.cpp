#include "banditrec/nmf.hpp"

#include <algorithm>
#include <cmath>

#include "banditrec/error.hpp"
#include "banditrec/rng.hpp"

namespace banditrec {
namespace kernels {

namespace {
constexpr double kEps = 1e-12;
}

void sparse_times_transpose(const SparseMatrix& X, const Eigen::MatrixXd& B,
                            Eigen::MatrixXd& out, Exec exec) {
  const Eigen::Index n = X.rows();
  const Eigen::Index r = B.rows();
  out.resize(n, r);
  auto row = [&](Eigen::Index i) {
    for (Eigen::Index k = 0; k < r; ++k) {
      double acc = 0.0;
      for (SparseMatrix::InnerIterator it(X, i); it; ++it) acc += it.value() * B(k, it.col());
      out(i, k) = acc;
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (Eigen::Index i = 0; i < n; ++i) row(i);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) row(i);
  }
}

void times_gram(const Eigen::MatrixXd& F, const Eigen::MatrixXd& G, Eigen::MatrixXd& out,
                Exec exec) {
  const Eigen::Index n = F.rows();
  const Eigen::Index r = G.cols();
  out.resize(n, r);
  auto row = [&](Eigen::Index i) {
    for (Eigen::Index k = 0; k < r; ++k) {
      double acc = 0.0;
      for (Eigen::Index l = 0; l < G.rows(); ++l) acc += F(i, l) * G(l, k);
      out(i, k) = acc;
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (Eigen::Index i = 0; i < n; ++i) row(i);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) row(i);
  }
}

void multiplicative_step(Eigen::MatrixXd& factor, const Eigen::MatrixXd& numer,
                         const Eigen::MatrixXd& denom, Exec exec) {
  const Eigen::Index n = factor.rows();
  auto row = [&](Eigen::Index i) {
    for (Eigen::Index k = 0; k < factor.cols(); ++k) {
      factor(i, k) *= numer(i, k) / (denom(i, k) + kEps);
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (Eigen::Index i = 0; i < n; ++i) row(i);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) row(i);
  }
}

}  // namespace kernels

namespace {

Eigen::MatrixXd gram(const Eigen::MatrixXd& F) {
  const Eigen::Index r = F.cols();
  Eigen::MatrixXd g(r, r);
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = 0; b < r; ++b) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < F.rows(); ++i) acc += F(i, a) * F(i, b);
      g(a, b) = acc;
    }
  }
  return g;
}

// ||X||^2 - 2 <W, X H^T> + <W^T W, H H^T>, with xht = X H^T.
double objective(double x_norm2, const Eigen::MatrixXd& W, const Eigen::MatrixXd& xht,
                 const Eigen::MatrixXd& wtw, const Eigen::MatrixXd& hht) {
  double cross = 0.0;
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    for (Eigen::Index k = 0; k < W.cols(); ++k) cross += W(i, k) * xht(i, k);
  }
  double quad = 0.0;
  for (Eigen::Index a = 0; a < wtw.rows(); ++a) {
    for (Eigen::Index b = 0; b < wtw.cols(); ++b) quad += wtw(a, b) * hht(a, b);
  }
  return std::max(0.0, x_norm2 - 2.0 * cross + quad);
}

}  // namespace

NmfResult nmf_factorize(const SparseMatrix& X, const NmfOptions& options) {
  if (options.rank == 0) throw ContractError("NMF rank must be at least 1");
  double x_norm2 = 0.0;
  for (Eigen::Index i = 0; i < X.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(X, i); it; ++it) {
      if (it.value() < 0.0 || !std::isfinite(it.value())) {
        throw ContractError("NMF input has a negative or non-finite entry at (" +
                            std::to_string(it.row()) + ", " + std::to_string(it.col()) + ")");
      }
      x_norm2 += it.value() * it.value();
    }
  }

  const Eigen::Index n = X.rows();
  const Eigen::Index m = X.cols();
  const auto r = static_cast<Eigen::Index>(options.rank);
  const Exec exec = options.exec;

  Rng rng(options.seed);
  NmfResult res;
  res.W.resize(n, r);
  Eigen::MatrixXd Ht(m, r);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < r; ++k) res.W(i, k) = rng.uniform(0.1, 1.1);
  for (Eigen::Index k = 0; k < r; ++k)
    for (Eigen::Index j = 0; j < m; ++j) Ht(j, k) = rng.uniform(0.1, 1.1);

  const SparseMatrix Xt = X.transpose();
  Eigen::MatrixXd xht, xtw, denom;
  Eigen::MatrixXd wt;

  Eigen::MatrixXd H = Ht.transpose();
  kernels::sparse_times_transpose(X, H, xht, exec);
  Eigen::MatrixXd wtw = gram(res.W);
  res.objective.push_back(objective(x_norm2, res.W, xht, wtw, gram(Ht)));

  for (std::size_t it = 0; it < options.max_iters; ++it) {
    // H step (as rows of H^T): H^T *= (X^T W) / (H^T W^T W).
    wt = res.W.transpose();
    kernels::sparse_times_transpose(Xt, wt, xtw, exec);
    kernels::times_gram(Ht, wtw, denom, exec);
    kernels::multiplicative_step(Ht, xtw, denom, exec);

    // W step: W *= (X H^T) / (W H H^T).
    H = Ht.transpose();
    const Eigen::MatrixXd hht = gram(Ht);
    kernels::sparse_times_transpose(X, H, xht, exec);
    kernels::times_gram(res.W, hht, denom, exec);
    kernels::multiplicative_step(res.W, xht, denom, exec);

    wtw = gram(res.W);
    const double f = objective(x_norm2, res.W, xht, wtw, hht);
    const double prev = res.objective.back();
    res.objective.push_back(f);
    res.iterations = it + 1;
    if (f == 0.0) break;
    if (options.tol > 0.0 && prev > 0.0 && std::abs(prev - f) / prev < options.tol) break;
  }
  res.H = Ht.transpose();
  return res;
}

NmfResult nmf_factorize(const Eigen::MatrixXd& X, const NmfOptions& options) {
  SparseMatrix s = X.sparseView(0.0, 0.0);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (X(i, j) < 0.0) {
        throw ContractError("NMF input has a negative entry at (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
      }
    }
  }
  return nmf_factorize(s, options);
}

}  // namespace banditrec
