#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "banditrec/parallel.hpp"
#include "banditrec/tfidf.hpp"

namespace banditrec {

struct NmfOptions {
  std::size_t rank = 16;
  std::size_t max_iters = 200;
  // Stop once |f_prev - f| / f_prev drops below this; 0 runs all iterations.
  double tol = 1e-4;
  std::uint64_t seed = 0;
  Exec exec = Exec::Parallel;
};

struct NmfResult {
  Eigen::MatrixXd W;  // rows x rank
  Eigen::MatrixXd H;  // rank x cols
  // ||X - WH||_F^2 at initialization and after every iteration.
  std::vector<double> objective;
  std::size_t iterations = 0;
};

// Lee-Seung multiplicative updates for min ||X - WH||_F^2 with W, H >= 0.
// Factors start uniform on [0.1, 1.1) from `seed`. Throws ContractError on a
// negative entry or rank 0.
NmfResult nmf_factorize(const SparseMatrix& X, const NmfOptions& options);
NmfResult nmf_factorize(const Eigen::MatrixXd& X, const NmfOptions& options);

namespace kernels {

// out = X * B^T for row-major sparse X (n x m) and dense B (r x m); out is n x r.
void sparse_times_transpose(const SparseMatrix& X, const Eigen::MatrixXd& B,
                            Eigen::MatrixXd& out, Exec exec);

// out = F * G for F (n x r) and a small square G (r x r).
void times_gram(const Eigen::MatrixXd& F, const Eigen::MatrixXd& G, Eigen::MatrixXd& out,
                Exec exec);

// factor(i, k) *= numer(i, k) / (denom(i, k) + eps), all row-major by i.
void multiplicative_step(Eigen::MatrixXd& factor, const Eigen::MatrixXd& numer,
                         const Eigen::MatrixXd& denom, Exec exec);

}  // namespace kernels
}  // namespace banditrec
