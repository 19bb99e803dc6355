// Serial reference against OpenMP kernels. Arg(0) is serial, Arg(1) parallel.

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "banditrec/metrics.hpp"
#include "banditrec/nmf.hpp"
#include "banditrec/rng.hpp"

using namespace banditrec;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

SparseMatrix random_sparse(std::size_t rows, std::size_t cols, double density, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (rng.bernoulli(density)) entries.emplace_back(static_cast<int>(i), static_cast<int>(j), rng.uniform());
    }
  }
  SparseMatrix X(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  X.setFromTriplets(entries.begin(), entries.end());
  return X;
}

Eigen::MatrixXd random_dense(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = 0.1 + rng.uniform();
  }
  return m;
}

void BM_SparseTimesTranspose(benchmark::State& state) {
  const auto X = random_sparse(4000, 3000, 0.01, 1);
  const auto B = random_dense(16, 3000, 2);
  Eigen::MatrixXd out;
  for (auto _ : state) {
    kernels::sparse_times_transpose(X, B, out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_TimesGram(benchmark::State& state) {
  const auto F = random_dense(20000, 16, 3);
  const auto G = random_dense(16, 16, 4);
  Eigen::MatrixXd out;
  for (auto _ : state) {
    kernels::times_gram(F, G, out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_NmfFactorize(benchmark::State& state) {
  const auto X = random_sparse(2000, 1500, 0.02, 5);
  NmfOptions options;
  options.rank = 16;
  options.max_iters = 20;
  options.tol = 0.0;
  options.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(nmf_factorize(X, options).W.data());
}

void BM_MetricCurves(benchmark::State& state) {
  Rng rng(6);
  std::vector<UserRanking> users(5000);
  for (auto& u : users) {
    for (std::size_t i = 0; i < 40; ++i) {
      const std::string id = "i" + std::to_string(i);
      u.ranked.push_back({i, id, rng.uniform()});
      u.truth[id] = rng.bernoulli(0.36) ? 1 : 0;
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(metric_curves(users, 10, exec_of(state)).data());
}

}  // namespace

BENCHMARK(BM_SparseTimesTranspose)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TimesGram)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NmfFactorize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MetricCurves)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
