#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "tbbgrad/errors.hpp"
#include "tbbgrad/kernels.hpp"
#include "tbbgrad/matrix_market.hpp"

using namespace tbbgrad;

namespace {

SpdOperator from_string(const std::string& text) {
  std::istringstream in(text);
  return read_matrix_market(in, "<test>");
}

long thrown_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_matrix_market(in, "<test>");
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("coordinate symmetric input parses with comments and blank lines") {
  SpdOperator a = from_string(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% tridiagonal example\n"
      "\n"
      "3 3 5\n"
      "1 1 2.0\n"
      "2 2 2.0\n"
      "% interior comment\n"
      "3 3 2.0\n"
      "2 1 -1.0\n"
      "3 2 -1.0\n");
  CHECK(a.dim() == 3);
  const Vec y = a.apply({1.0, 1.0, 1.0});
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(0.0));
  CHECK(y[2] == doctest::Approx(1.0));
}

TEST_CASE("either triangle, integer field, and summed duplicates are accepted") {
  // Upper triangle with an integer field and a duplicated diagonal entry.
  SpdOperator a = from_string(
      "%%matrixmarket MATRIX coordinate integer SYMMETRIC\n"
      "2 2 3\n"
      "1 1 1\n"
      "1 1 1\n"
      "1 2 3\n");
  const Vec y = a.apply({1.0, 1.0});
  CHECK(y[0] == doctest::Approx(5.0));  // 2 (summed) + 3 (mirrored)
  CHECK(y[1] == doctest::Approx(3.0));
}

TEST_CASE("banner violations are rejected with the offending line") {
  CHECK(thrown_line("%%NotMatrixMarket matrix coordinate real symmetric\n1 1 1\n1 1 1\n") == 1);
  CHECK(thrown_line("%%MatrixMarket matrix array real symmetric\n1 1\n1\n") == 1);
  CHECK(thrown_line("%%MatrixMarket matrix coordinate pattern symmetric\n1 1 1\n1 1\n") == 1);
  CHECK(thrown_line("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n") == 1);
  CHECK(thrown_line("") == 1);
}

TEST_CASE("size line violations carry their line number") {
  const char* nonsquare =
      "%%MatrixMarket matrix coordinate real symmetric\n2 3 1\n1 1 1.0\n";
  CHECK(thrown_line(nonsquare) == 2);
  CHECK_THROWS_WITH_AS(from_string(nonsquare), doctest::Contains("square"), ParseError);

  CHECK(thrown_line("%%MatrixMarket matrix coordinate real symmetric\n% only comments\n") == 2);
  CHECK(thrown_line("%%MatrixMarket matrix coordinate real symmetric\nnot numbers\n") == 2);
  CHECK(thrown_line("%%MatrixMarket matrix coordinate real symmetric\n2 2 1 9\n") == 2);
  CHECK(thrown_line("%%MatrixMarket matrix coordinate real symmetric\n0 0 0\n") == 2);
}

TEST_CASE("entry violations carry their line number") {
  const std::string head = "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n";
  CHECK(thrown_line(head + "1 1 1.0\nbroken\n") == 4);
  CHECK(thrown_line(head + "1 1 1.0\n3 1 1.0\n") == 4);       // index out of range
  CHECK(thrown_line(head + "1 1 1.0\n2 2 1.0 7\n") == 4);     // trailing token
  CHECK(thrown_line(head + "1 1 1.0\n") == 3);                // fewer than declared
  CHECK(thrown_line(head + "1 1 1.0\n2 2 1.0\n1 2 0.5\n") == 5);  // extra data
  // Conflicting mirror values surface as a parse error too.
  CHECK_THROWS_AS(from_string(head + "1 2 1.0\n2 1 2.0\n"), ParseError);
}

TEST_CASE("shipped fixtures load with the documented shapes") {
  SpdOperator tri = load_matrix_market(std::string(FIXTURE_DIR) + "/tridiag_16.mtx");
  CHECK(tri.dim() == 16);
  CHECK(tri.nnz() == 16 + 2 * 15);
  // Second difference matrix: A e has unit entries only at the boundary.
  const Vec ones(16, 1.0);
  const Vec y = tri.apply(ones);
  CHECK(y.front() == doctest::Approx(1.0));
  CHECK(y.back() == doctest::Approx(1.0));
  for (std::size_t i = 1; i + 1 < y.size(); ++i) CHECK(y[i] == doctest::Approx(0.0));

  SpdOperator geo = load_matrix_market(std::string(FIXTURE_DIR) + "/diag_geo_12.mtx");
  CHECK(geo.dim() == 12);
  const Vec d = geo.apply(Vec(12, 1.0));
  CHECK(d.front() == doctest::Approx(1.0));
  CHECK(d.back() == doctest::Approx(1000.0));

  SpdOperator banded = load_matrix_market(std::string(FIXTURE_DIR) + "/banded5_20.mtx");
  CHECK(banded.dim() == 20);
  CHECK(banded.nnz() == 20 + 2 * 19 + 2 * 18);
}

TEST_CASE("the asymmetric sample is rejected at the banner") {
  CHECK_THROWS_WITH_AS(
      load_matrix_market(std::string(TEST_DATA_DIR) + "/bad_asymmetric.mtx"),
      doctest::Contains("symmetric required"), ParseError);
}

TEST_CASE("missing files name the path") {
  CHECK_THROWS_WITH_AS(load_matrix_market("/no/such/file.mtx"),
                       doctest::Contains("/no/such/file.mtx"), std::runtime_error);
}

TEST_CASE("write and re-read reproduces the operator exactly") {
  SpdOperator orig = load_matrix_market(std::string(FIXTURE_DIR) + "/banded5_20.mtx");
  std::ostringstream out;
  write_matrix_market(out, orig);
  SpdOperator back = from_string(out.str());
  CHECK(back.dim() == orig.dim());
  CHECK(back.nnz() == orig.nnz());
  std::mt19937_64 rng(13);
  const Vec x = test_helpers::random_vec(rng, 20);
  const Vec y0 = orig.apply(x);
  const Vec y1 = back.apply(x);
  for (std::size_t i = 0; i < y0.size(); ++i) CHECK(y0[i] == y1[i]);  // %.17g is lossless
}

TEST_CASE("quadratic_from_operator sets b = A e and the all-ones minimizer") {
  SpdOperator a = load_matrix_market(std::string(FIXTURE_DIR) + "/tridiag_16.mtx");
  QuadraticProblem p = quadratic_from_operator("tri", a, -10.0);
  CHECK(p.dim() == 16);
  REQUIRE(p.x_star().has_value());
  Vec g(16);
  p.gradient(*p.x_star(), g);
  for (double v : g) CHECK(v == doctest::Approx(0.0));
  CHECK(p.x0().front() == -10.0);

  // scale_by_g0 rescales the objective so the starting gradient has norm 1.
  QuadraticProblem scaled = quadratic_from_operator("tri_scaled", a, -10.0, true);
  Vec g0(16);
  scaled.gradient(scaled.x0(), g0);
  CHECK(kernels::nrm2(g0) == doctest::Approx(1.0).epsilon(1e-12));
}
