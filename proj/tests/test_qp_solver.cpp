#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "tbbgrad/qp_solver.hpp"

using namespace tbbgrad;

namespace {

QuadraticProblem diag_qp(Vec eigs, double x0_value = -10.0) {
  SpdOperator a = SpdOperator::diagonal(std::move(eigs));
  const auto n = static_cast<std::size_t>(a.dim());
  Vec ones(n, 1.0);
  Vec b = a.apply(ones);
  Vec x0(n, x0_value);
  QuadraticProblem p("diag_qp", std::move(a), std::move(b), std::move(x0), ones);
  return p;
}

QpSolverConfig config(const char* strategy) {
  QpSolverConfig cfg;
  cfg.strategy = TargetStrategy::parse(strategy);
  return cfg;
}

}  // namespace

TEST_CASE("bb2 converges on a diagonal quadratic with exact evaluation counts") {
  QuadraticProblem p = diag_qp({1.0, 2.0, 5.0});
  QpSolverConfig cfg = config("bb2");
  cfg.tol = 1e-10;
  const RunTrace t = solve_quadratic(p, cfg);
  REQUIRE(t.status == RunStatus::Converged);
  CHECK(t.final_g_norm <= cfg.tol * t.g0_norm);
  CHECK(t.n_f == t.iterations + 1);
  CHECK(t.n_g == t.iterations + 1);
  CHECK(p.counters().n_f == t.n_f);
  // At the minimizer e: f = 0.5 e'Ae - (Ae)'e = -0.5 (1+2+5).
  CHECK(t.final_f == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("trace rows follow the initial/step/terminal layout") {
  QuadraticProblem p = diag_qp({1.0, 3.0, 9.0});
  QpSolverConfig cfg = config("cot:1:1");
  cfg.beta0 = 0.123;
  cfg.tol = 1e-8;
  const RunTrace t = solve_quadratic(p, cfg);
  REQUIRE(t.status == RunStatus::Converged);
  REQUIRE(t.rows.size() == static_cast<std::size_t>(t.iterations) + 1);

  CHECK(t.rows.front().k == 0);
  CHECK(t.rows.front().source == StepSource::Initial);
  CHECK(t.rows.front().beta == 0.123);
  CHECK(t.rows.front().tau.kind == TargetKind::NA);
  CHECK(t.rows.front().g_norm == t.g0_norm);

  for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(t.rows[i].k == static_cast<long>(i));
  for (std::size_t i = 1; i + 1 < t.rows.size(); ++i) {
    CHECK(t.rows[i].source == StepSource::Tbb);
    CHECK(t.rows[i].alpha == 1.0 / t.rows[i].beta);
    CHECK(t.rows[i].tau.is_finite());
    CHECK(t.rows[i].tau.value < 0.0);  // cot targets are negative
  }

  const TraceRow& last = t.rows.back();
  CHECK(last.source == StepSource::Terminal);
  CHECK(last.k == t.iterations);
  CHECK(std::isnan(last.beta));
  CHECK(last.g_norm == t.final_g_norm);
  CHECK(last.f == t.final_f);
}

TEST_CASE("starting at the minimizer converges in zero iterations") {
  QuadraticProblem p = diag_qp({2.0, 4.0}, 1.0);  // x0 = e = minimizer
  const RunTrace t = solve_quadratic(p, config("bb1"));
  CHECK(t.status == RunStatus::Converged);
  CHECK(t.iterations == 0);
  CHECK(t.final_g_norm == 0.0);
  CHECK(t.n_f == 1);
  CHECK(t.n_g == 1);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows.front().source == StepSource::Terminal);
}

TEST_CASE("an indefinite operator is reported as a solver error") {
  // Symmetric but indefinite: passes construction, fails the s'y > 0 check.
  SpdOperator a = SpdOperator::dense(2, {1.0, 0.0, 0.0, -1.0});
  QuadraticProblem p("indefinite", std::move(a), Vec{0.0, 0.0}, Vec{1.0, 2.0});
  const RunTrace t = solve_quadratic(p, config("bb1"));
  CHECK(t.status == RunStatus::Error);
  CHECK(t.message.find("not positive definite") != std::string::npos);
  CHECK(t.iterations == 1);
  CHECK(t.rows.back().source == StepSource::Terminal);
}

TEST_CASE("max_iter is honored when the tolerance is unreachable") {
  // Four incommensurate eigenvalues: the gradient cannot hit exactly zero in
  // seven steps (a two-eigenvalue problem can, by finite termination).
  QuadraticProblem p = diag_qp({1.0, 2.3, 5.7, 9.1});
  QpSolverConfig cfg = config("bb1");
  cfg.tol = 0.0;
  cfg.max_iter = 7;
  const RunTrace t = solve_quadratic(p, cfg);
  CHECK(t.status == RunStatus::MaxIter);
  CHECK(t.iterations == 7);
  CHECK(t.rows.size() == 8);
  CHECK(t.n_f == 8);
}

TEST_CASE("adaptive strategies label their branch in the trace") {
  QuadraticProblem p = diag_qp({1.0, 4.0, 16.0, 64.0});
  QpSolverConfig cfg = config("abbmin:0.8:4");
  cfg.tol = 1e-8;
  const RunTrace t = solve_quadratic(p, cfg);
  REQUIRE(t.status == RunStatus::Converged);
  bool saw_pick = false;
  for (std::size_t i = 1; i + 1 < t.rows.size(); ++i) {
    const StepSource src = t.rows[i].source;
    CHECK((src == StepSource::AbbPickBb1 || src == StepSource::AbbPickBb2));
    CHECK(t.rows[i].tau.kind == TargetKind::NA);
    saw_pick = true;
  }
  CHECK(saw_pick);
}

TEST_CASE("recorded gradients satisfy the gradient recursion") {
  QuadraticProblem p = diag_qp({1.0, 2.5, 7.0, 20.0});
  QpSolverConfig cfg = config("bb2");
  cfg.tol = 1e-9;
  cfg.record_gradients = true;
  const RunTrace t = solve_quadratic(p, cfg);
  REQUIRE(t.status == RunStatus::Converged);
  REQUIRE(t.gradients.size() >= 2);
  CHECK(gradient_recursion_residual(p, t) <= 1e-10);
  CHECK(verify_gradient_recursion(p, t));

  // Without recorded gradients the residual is vacuously zero.
  cfg.record_gradients = false;
  const RunTrace bare = solve_quadratic(p, cfg);
  CHECK(gradient_recursion_residual(p, bare) == 0.0);
}

TEST_CASE("inverse stepsizes stay inside the spectral bracket") {
  QuadraticProblem p = diag_qp({1.0, 2.0, 3.0, 5.0, 8.0, 10.0});
  QpSolverConfig cfg = config("bb1");
  cfg.tol = 1e-9;
  const RunTrace t = solve_quadratic(p, cfg);
  REQUIRE(t.status == RunStatus::Converged);
  const Assumption1Report rep = assumption1_check(t, 1.0, 10.0, 1.0, 1.0);
  CHECK(rep.fraction == 1.0);
  CHECK(rep.checked == t.iterations - 1);
  CHECK(rep.min_alpha_over_lambda1 >= 1.0 - 1e-8);
  CHECK(rep.max_alpha_over_lambda_n <= 1.0 + 1e-8);

  // ibb2 widens the lower edge by (rho-1)/rho.
  QpSolverConfig cfg2 = config("ibb2:2.01");
  cfg2.tol = 1e-9;
  const RunTrace t2 = solve_quadratic(p, cfg2);
  REQUIRE(t2.status == RunStatus::Converged);
  const Assumption1Report rep2 = assumption1_check(t2, 1.0, 10.0, 1.01 / 2.01, 1.0);
  CHECK(rep2.fraction == 1.0);
}

TEST_CASE("assumption report on an empty audit window") {
  QuadraticProblem p = diag_qp({2.0, 4.0}, 1.0);  // converges instantly
  const RunTrace t = solve_quadratic(p, config("bb1"));
  const Assumption1Report rep = assumption1_check(t, 2.0, 4.0, 1.0, 1.0);
  CHECK(rep.checked == 0);
  CHECK(rep.fraction == 1.0);
}

TEST_CASE("trace csv renders header, targets, and the terminal row") {
  QuadraticProblem p = diag_qp({1.0, 2.0});
  QpSolverConfig cfg = config("bb2");
  cfg.tol = 1e-6;
  const RunTrace t = solve_quadratic(p, cfg);
  std::ostringstream out;
  write_trace_csv(out, t, false);
  const std::string csv = out.str();
  CHECK(csv.rfind("k,beta,alpha,tau,gnorm,fval,source\n", 0) == 0);
  CHECK(csv.find(",initial\n") != std::string::npos);
  CHECK(csv.find("na,na,na") != std::string::npos);  // terminal beta/alpha/tau
  CHECK(csv.find(",terminal\n") != std::string::npos);
  // One line per row plus the header, each "\n"-terminated.
  std::size_t lines = 0;
  for (char c : csv) lines += (c == '\n');
  CHECK(lines == t.rows.size() + 1);
}

TEST_CASE("identical configurations reproduce identical traces") {
  QuadraticProblem p = diag_qp({1.0, 5.0, 25.0});
  QpSolverConfig cfg = config("abb:0.8");
  cfg.tol = 1e-10;
  const RunTrace a = solve_quadratic(p, cfg);
  const RunTrace b = solve_quadratic(p, cfg);
  REQUIRE(a.rows.size() == b.rows.size());
  CHECK(a.iterations == b.iterations);
  CHECK(a.final_g_norm == b.final_g_norm);
  CHECK(a.final_f == b.final_f);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].g_norm == b.rows[i].g_norm);
    CHECK(a.rows[i].f == b.rows[i].f);
  }
}
