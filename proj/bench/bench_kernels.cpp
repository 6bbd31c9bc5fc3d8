// Serial reference against the OpenMP kernels.
#include <benchmark/benchmark.h>

#include <random>

#include "qmemcap/chanrep.hpp"
#include "qmemcap/kernels.hpp"
#include "qmemcap/linalg.hpp"

using namespace qmemcap;

namespace {

std::vector<Mat> kraus_set(int d, int k) {
  std::mt19937_64 rng(7);
  return random_channel(d, k, rng).kraus();
}

void BM_transfer(benchmark::State& st, bool parallel) {
  auto ks = kraus_set(static_cast<int>(st.range(0)), 8);
  for (auto _ : st) {
    Mat t = parallel ? kernels::transfer_from_kraus(ks) : kernels::transfer_from_kraus_serial(ks);
    benchmark::DoNotOptimize(t.data());
  }
}

void BM_residual(benchmark::State& st, bool parallel) {
  const int d = static_cast<int>(st.range(0));
  std::mt19937_64 rng(8);
  std::vector<Mat> mats;
  for (int i = 0; i < 12; ++i) mats.push_back(complex_gaussian(d, d, rng));
  Mat q = span_basis(std::vector<Mat>(mats.begin(), mats.begin() + 6));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) pairs.emplace_back(i, j);
  for (auto _ : st) {
    double r = parallel ? kernels::product_residual(mats, q, pairs) : kernels::product_residual_serial(mats, q, pairs);
    benchmark::DoNotOptimize(r);
  }
}

void BM_sandwich(benchmark::State& st, bool parallel) {
  const int d = static_cast<int>(st.range(0));
  auto ks = kraus_set(d, 4);
  std::mt19937_64 rng(9);
  std::vector<Mat> xs;
  for (int i = 0; i < 6; ++i) xs.push_back(random_density(d, rng));
  for (auto _ : st) {
    Mat c = parallel ? kernels::sandwich_columns(ks, xs) : kernels::sandwich_columns_serial(ks, xs);
    benchmark::DoNotOptimize(c.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_transfer, serial, false)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK_CAPTURE(BM_transfer, omp, true)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK_CAPTURE(BM_residual, serial, false)->Arg(4)->Arg(8);
BENCHMARK_CAPTURE(BM_residual, omp, true)->Arg(4)->Arg(8);
BENCHMARK_CAPTURE(BM_sandwich, serial, false)->Arg(4)->Arg(8);
BENCHMARK_CAPTURE(BM_sandwich, omp, true)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
