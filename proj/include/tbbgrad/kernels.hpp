#pragma once

#include <cstddef>
#include <span>

// Vector and matrix-vector kernels. kernels::serial is the reference
// implementation; kernels::omp holds the OpenMP variants (compiled to the
// serial code when OpenMP is unavailable). The unqualified entry points
// dispatch on problem size.
//
// Determinism contract: for a fixed thread count, every kernel returns
// bit-identical results across runs. Elementwise kernels and row-parallel
// matvecs are bit-identical to serial; parallel reductions (dot, nrm2_sq)
// combine per-thread partials in thread-id order, so they are reproducible
// but may differ from the serial sum in the last ulps.

namespace tbbgrad::kernels {

// Below this size the dispatching wrappers always take the serial path.
inline constexpr std::size_t parallel_cutoff = 8192;

namespace serial {

double dot(std::span<const double> a, std::span<const double> b);
double nrm2_sq(std::span<const double> a);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scal(double alpha, std::span<double> x);
// y = A x for row-major dense A (n x n)
void matvec_dense(std::size_t n, std::span<const double> a, std::span<const double> x,
                  std::span<double> y);
// y = diag(d) x
void matvec_diag(std::span<const double> d, std::span<const double> x, std::span<double> y);
// y = A x for CSR A
void matvec_csr(std::span<const std::size_t> row_ptr, std::span<const int> col,
                std::span<const double> val, std::span<const double> x, std::span<double> y);

}  // namespace serial

namespace omp {

double dot(std::span<const double> a, std::span<const double> b);
double nrm2_sq(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scal(double alpha, std::span<double> x);
void matvec_dense(std::size_t n, std::span<const double> a, std::span<const double> x,
                  std::span<double> y);
void matvec_diag(std::span<const double> d, std::span<const double> x, std::span<double> y);
void matvec_csr(std::span<const std::size_t> row_ptr, std::span<const int> col,
                std::span<const double> val, std::span<const double> x, std::span<double> y);

}  // namespace omp

double dot(std::span<const double> a, std::span<const double> b);
double nrm2_sq(std::span<const double> a);
double nrm2(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scal(double alpha, std::span<double> x);
void matvec_dense(std::size_t n, std::span<const double> a, std::span<const double> x,
                  std::span<double> y);
void matvec_diag(std::span<const double> d, std::span<const double> x, std::span<double> y);
void matvec_csr(std::span<const std::size_t> row_ptr, std::span<const int> col,
                std::span<const double> val, std::span<const double> x, std::span<double> y);

}  // namespace tbbgrad::kernels
