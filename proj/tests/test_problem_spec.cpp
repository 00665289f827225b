#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "doctest.h"
#include "tbbgrad/kernels.hpp"
#include "tbbgrad/problem_spec.hpp"

using namespace tbbgrad;

namespace {
const QuadraticProblem& as_quad(const AnyProblem& p) {
  return std::get<QuadraticProblem>(p);
}
}  // namespace

TEST_CASE("each problem kind parses to the matching problem") {
  const AnyProblem geo = parse_problem_spec("geometric:n=10,l1=1,ln=100,seed=7,x0=3");
  CHECK(as_quad(geo).name() == "geometric_n10_k100_s7");
  CHECK(as_quad(geo).x0() == Vec(10, 3.0));

  const AnyProblem tc =
      parse_problem_spec("twocluster:n=8,l1=1,ln=50,frac1=0.25,c1=2,c2=40,jitter=1,seed=2");
  CHECK(as_quad(tc).name() == "two_cluster_n8_k50_s2");

  const AnyProblem cov = parse_problem_spec("covariance:n=12,l1=0.5,ln=5,ratio=0.25,seed=3");
  CHECK(as_quad(cov).name() == "covariance_like_n12_k10_s3");

  const AnyProblem rd = parse_problem_spec("randdiag:n=6,kappa=1e3,seed=4");
  CHECK(as_quad(rd).name() == "rand_diag_n6_k1000_s4");

  const AnyProblem fn = parse_problem_spec("fn:extended_rosenbrock,n=4");
  const auto& nl = std::get<NonlinearProblem>(fn);
  CHECK(nl.name() == "extended_rosenbrock");
  CHECK(nl.x0() == Vec{-1.2, 1.0, -1.2, 1.0});
}

TEST_CASE("matrix-market specs name the problem after the file stem") {
  const std::string path = std::string(FIXTURE_DIR) + "/tridiag_16.mtx";
  const AnyProblem p = parse_problem_spec("mm:" + path);
  CHECK(as_quad(p).name() == "tridiag_16");
  CHECK(as_quad(p).dim() == 16);
  CHECK(as_quad(p).x0() == Vec(16, -10.0));

  const AnyProblem scaled = parse_problem_spec("mm:" + path + ",scale_g0=1,x0=2");
  Vec g(16);
  as_quad(scaled).gradient(as_quad(scaled).x0(), g);
  CHECK(std::sqrt(kernels::nrm2_sq(g)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("starting-point multipliers apply to collection functions") {
  const AnyProblem p = parse_problem_spec("fn:extended_rosenbrock,n=4,x0mult=5");
  CHECK(std::get<NonlinearProblem>(p).x0() == Vec{-6.0, 5.0, -6.0, 5.0});
}

TEST_CASE("seeded kinds fall back to the top-level seed") {
  const AnyProblem p = parse_problem_spec("geometric:n=4,l1=1,ln=10", 9);
  CHECK(as_quad(p).name() == "geometric_n4_k10_s9");
  CHECK_THROWS_WITH_AS(parse_problem_spec("geometric:n=4,l1=1,ln=10"),
                       doctest::Contains("seed required"), std::invalid_argument);
  // Explicit seed wins over the fallback.
  const AnyProblem q = parse_problem_spec("geometric:n=4,l1=1,ln=10,seed=2", 9);
  CHECK(as_quad(q).name() == "geometric_n4_k10_s2");
}

TEST_CASE("malformed specs echo the offending token") {
  CHECK_THROWS_WITH_AS(parse_problem_spec("bogus:n=1"),
                       doctest::Contains("unknown problem kind 'bogus'"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_problem_spec("geometric"),
                       doctest::Contains("expected kind ':'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_problem_spec("geometric:n=4,l1=1,ln=10,seed=1,zap=3"),
                       doctest::Contains("unknown key 'zap'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_problem_spec("geometric:n=4,l1=1,ln=10,seed=1,ratio=0.5"),
                       doctest::Contains("unknown key 'ratio'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_problem_spec("geometric:n=4,n=5,l1=1,ln=10,seed=1"),
                       doctest::Contains("duplicate key 'n'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_problem_spec("geometric:n=4,l1=abc,ln=10,seed=1"),
                       doctest::Contains("bad value for l1: 'abc'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_problem_spec("geometric:n=2.5,l1=1,ln=10,seed=1"),
                       doctest::Contains("'n' must be an integer"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_problem_spec("geometric:l1=1,ln=10,seed=1"),
                       doctest::Contains("missing required key 'n'"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_problem_spec("geometric:n,l1=1,ln=10,seed=1"),
                       doctest::Contains("expected key=value, got 'n'"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_problem_spec("geometric:n=4,l1=1,ln=10,seed=xyz"),
                       doctest::Contains("bad value for seed: 'xyz'"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_problem_spec("mm:"), doctest::Contains("missing name or path"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_problem_spec("fn:not_a_function"), std::invalid_argument);
}

TEST_CASE("spec kind predicates") {
  CHECK(is_generator_spec("geometric:n=4,l1=1,ln=10"));
  CHECK(is_generator_spec("twocluster:n=4,l1=1,ln=10"));
  CHECK(is_generator_spec("covariance:n=4,l1=1,ln=10"));
  CHECK(is_generator_spec("randdiag:n=4,kappa=10"));
  CHECK_FALSE(is_generator_spec("mm:some.mtx"));
  CHECK_FALSE(is_generator_spec("fn:griewank"));
  CHECK(is_nonlinear_spec("fn:griewank"));
  CHECK_FALSE(is_nonlinear_spec("geometric:n=4,l1=1,ln=10"));
}
