#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "tbbgrad/kernels.hpp"

using namespace tbbgrad;
using test_helpers::random_vec;

namespace {

struct CsrFixture {
  std::vector<std::size_t> row_ptr{0, 2, 5, 7};
  std::vector<int> col{0, 1, 0, 1, 2, 1, 2};
  std::vector<double> val{2, 1, 1, 3, 4, 4, 5};
};

}  // namespace

TEST_CASE("serial kernels match hand results") {
  Vec a{1.0, -2.0, 3.0};
  Vec b{4.0, 5.0, -6.0};
  CHECK(kernels::serial::dot(a, b) == doctest::Approx(4.0 - 10.0 - 18.0));
  CHECK(kernels::serial::nrm2_sq(a) == doctest::Approx(14.0));

  Vec y{1.0, 1.0, 1.0};
  kernels::serial::axpy(2.0, a, y);
  CHECK(y[0] == 3.0);
  CHECK(y[1] == -3.0);
  CHECK(y[2] == 7.0);

  kernels::serial::scal(-1.0, y);
  CHECK(y[0] == -3.0);
  CHECK(y[1] == 3.0);
  CHECK(y[2] == -7.0);
}

TEST_CASE("serial matvec variants match hand results") {
  // A = [[2,1],[1,3]], x = (1,2)
  Vec dense{2, 1, 1, 3};
  Vec x{1, 2};
  Vec out(2);
  kernels::serial::matvec_dense(2, dense, x, out);
  CHECK(out[0] == 4.0);
  CHECK(out[1] == 7.0);

  Vec d{3, -2};
  kernels::serial::matvec_diag(d, x, out);
  CHECK(out[0] == 3.0);
  CHECK(out[1] == -4.0);

  CsrFixture csr;
  Vec x3{1, 2, 3};
  Vec out3(3);
  kernels::serial::matvec_csr(csr.row_ptr, csr.col, csr.val, x3, out3);
  CHECK(out3[0] == 4.0);
  CHECK(out3[1] == 19.0);
  CHECK(out3[2] == 23.0);
}

TEST_CASE("omp kernels agree with serial across the dispatch cutoff") {
  std::mt19937_64 rng(42);
  for (std::size_t n : {std::size_t{1000}, kernels::parallel_cutoff * 2}) {
    CAPTURE(n);
    const Vec a = random_vec(rng, n);
    const Vec b = random_vec(rng, n);

    // Reductions may reassociate: relative agreement only.
    const double ds = kernels::serial::dot(a, b);
    const double dp = kernels::omp::dot(a, b);
    CHECK(std::abs(dp - ds) <= 1e-12 * (1.0 + std::abs(ds)));
    const double ns = kernels::serial::nrm2_sq(a);
    CHECK(std::abs(kernels::omp::nrm2_sq(a) - ns) <= 1e-12 * (1.0 + ns));

    // Elementwise kernels are bit-identical by contract.
    Vec ys = b, yp = b;
    kernels::serial::axpy(0.37, a, ys);
    kernels::omp::axpy(0.37, a, yp);
    CHECK(ys == yp);

    Vec ss = a, sp = a;
    kernels::serial::scal(1.25, ss);
    kernels::omp::scal(1.25, sp);
    CHECK(ss == sp);

    Vec diag = random_vec(rng, n, 0.5, 2.0);
    Vec outs(n), outp(n);
    kernels::serial::matvec_diag(diag, a, outs);
    kernels::omp::matvec_diag(diag, a, outp);
    CHECK(outs == outp);
  }
}

TEST_CASE("parallel dense and csr matvecs are bit-identical to serial") {
  std::mt19937_64 rng(7);
  const std::size_t n = 150;  // n*n comfortably above the cutoff
  const Vec a = random_vec(rng, n * n);
  const Vec x = random_vec(rng, n);
  Vec outs(n), outp(n), outd(n);
  kernels::serial::matvec_dense(n, a, x, outs);
  kernels::omp::matvec_dense(n, a, x, outp);
  kernels::matvec_dense(n, a, x, outd);
  CHECK(outs == outp);
  CHECK(outs == outd);

  // Random banded CSR, bandwidth 3.
  const std::size_t m = 20000;
  std::vector<std::size_t> row_ptr(m + 1, 0);
  std::vector<int> col;
  std::vector<double> val;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = (i < 3 ? 0 : i - 3); j <= std::min(m - 1, i + 3); ++j) {
      col.push_back(static_cast<int>(j));
      val.push_back(random_vec(rng, 1)[0]);
    }
    row_ptr[i + 1] = col.size();
  }
  const Vec xm = random_vec(rng, m);
  Vec cs(m), cp(m), cd(m);
  kernels::serial::matvec_csr(row_ptr, col, val, xm, cs);
  kernels::omp::matvec_csr(row_ptr, col, val, xm, cp);
  kernels::matvec_csr(row_ptr, col, val, xm, cd);
  CHECK(cs == cp);
  CHECK(cs == cd);
}

TEST_CASE("dispatching wrappers are deterministic and route small sizes serially") {
  std::mt19937_64 rng(11);
  const Vec small_a = random_vec(rng, 512);
  const Vec small_b = random_vec(rng, 512);
  // Below the cutoff the wrapper is the serial kernel, bit for bit.
  CHECK(kernels::dot(small_a, small_b) == kernels::serial::dot(small_a, small_b));
  CHECK(kernels::nrm2_sq(small_a) == kernels::serial::nrm2_sq(small_a));
  CHECK(kernels::nrm2(small_a) == std::sqrt(kernels::serial::nrm2_sq(small_a)));

  // At any size, repeated calls reproduce the same bits.
  const Vec big_a = random_vec(rng, kernels::parallel_cutoff * 3);
  const Vec big_b = random_vec(rng, kernels::parallel_cutoff * 3);
  const double first = kernels::dot(big_a, big_b);
  for (int rep = 0; rep < 5; ++rep) CHECK(kernels::dot(big_a, big_b) == first);
  const double n1 = kernels::nrm2_sq(big_a);
  for (int rep = 0; rep < 5; ++rep) CHECK(kernels::nrm2_sq(big_a) == n1);
}
