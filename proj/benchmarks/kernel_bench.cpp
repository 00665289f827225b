// Serial vs OpenMP kernel comparison around the dispatch cutoff (8192).
// Build with -DTBBGRAD_BENCH=ON; run ./kernel_bench --benchmark_filter=dot.
#include <benchmark/benchmark.h>

#include <cstddef>
#include <random>
#include <vector>

#include "tbbgrad/kernels.hpp"

namespace {

using tbbgrad::kernels::parallel_cutoff;

std::vector<double> random_data(std::size_t n, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

void vector_sizes(benchmark::internal::Benchmark* b) {
  b->Arg(static_cast<long>(parallel_cutoff) / 8)
      ->Arg(static_cast<long>(parallel_cutoff))
      ->Arg(static_cast<long>(parallel_cutoff) * 8)
      ->Arg(static_cast<long>(parallel_cutoff) * 64);
}

template <double Fn(std::span<const double>, std::span<const double>)>
void bm_dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_data(n, 1);
  const auto b = random_data(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(a, b));
  state.SetBytesProcessed(static_cast<long>(state.iterations()) * static_cast<long>(n) * 16);
}

template <double Fn(std::span<const double>)>
void bm_nrm2_sq(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_data(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(a));
  state.SetBytesProcessed(static_cast<long>(state.iterations()) * static_cast<long>(n) * 8);
}

template <void Fn(double, std::span<const double>, std::span<double>)>
void bm_axpy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_data(n, 4);
  auto y = random_data(n, 5);
  for (auto _ : state) {
    Fn(0.5, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetBytesProcessed(static_cast<long>(state.iterations()) * static_cast<long>(n) * 24);
}

template <void Fn(std::size_t, std::span<const double>, std::span<const double>,
                  std::span<double>)>
void bm_matvec_dense(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_data(n * n, 6);
  const auto x = random_data(n, 7);
  std::vector<double> y(n);
  for (auto _ : state) {
    Fn(n, a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetBytesProcessed(static_cast<long>(state.iterations()) *
                          static_cast<long>(n * n + 2 * n) * 8);
}

// Pentadiagonal CSR pattern: ~5 entries per row.
struct Csr {
  std::vector<std::size_t> row_ptr;
  std::vector<int> col;
  std::vector<double> val;
};

Csr banded_csr(std::size_t n) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> dist(0.1, 1.0);
  Csr m;
  m.row_ptr.resize(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (long j = static_cast<long>(i) - 2; j <= static_cast<long>(i) + 2; ++j) {
      if (j < 0 || j >= static_cast<long>(n)) continue;
      m.col.push_back(static_cast<int>(j));
      m.val.push_back(dist(rng));
    }
    m.row_ptr[i + 1] = m.col.size();
  }
  return m;
}

template <void Fn(std::span<const std::size_t>, std::span<const int>, std::span<const double>,
                  std::span<const double>, std::span<double>)>
void bm_matvec_csr(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Csr m = banded_csr(n);
  const auto x = random_data(n, 9);
  std::vector<double> y(n);
  for (auto _ : state) {
    Fn(m.row_ptr, m.col, m.val, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetBytesProcessed(static_cast<long>(state.iterations()) *
                          static_cast<long>(m.val.size()) * 12);
}

}  // namespace

BENCHMARK(bm_dot<tbbgrad::kernels::serial::dot>)->Name("dot/serial")->Apply(vector_sizes);
BENCHMARK(bm_dot<tbbgrad::kernels::omp::dot>)->Name("dot/omp")->Apply(vector_sizes);
BENCHMARK(bm_nrm2_sq<tbbgrad::kernels::serial::nrm2_sq>)
    ->Name("nrm2_sq/serial")
    ->Apply(vector_sizes);
BENCHMARK(bm_nrm2_sq<tbbgrad::kernels::omp::nrm2_sq>)->Name("nrm2_sq/omp")->Apply(vector_sizes);
BENCHMARK(bm_axpy<tbbgrad::kernels::serial::axpy>)->Name("axpy/serial")->Apply(vector_sizes);
BENCHMARK(bm_axpy<tbbgrad::kernels::omp::axpy>)->Name("axpy/omp")->Apply(vector_sizes);
BENCHMARK(bm_matvec_dense<tbbgrad::kernels::serial::matvec_dense>)
    ->Name("matvec_dense/serial")
    ->Arg(128)
    ->Arg(512)
    ->Arg(2048);
BENCHMARK(bm_matvec_dense<tbbgrad::kernels::omp::matvec_dense>)
    ->Name("matvec_dense/omp")
    ->Arg(128)
    ->Arg(512)
    ->Arg(2048);
BENCHMARK(bm_matvec_csr<tbbgrad::kernels::serial::matvec_csr>)
    ->Name("matvec_csr/serial")
    ->Apply(vector_sizes);
BENCHMARK(bm_matvec_csr<tbbgrad::kernels::omp::matvec_csr>)
    ->Name("matvec_csr/omp")
    ->Apply(vector_sizes);

BENCHMARK_MAIN();
