#pragma once

#include "tbbgrad/problems.hpp"
#include "tbbgrad/stepsize.hpp"
#include "tbbgrad/trace.hpp"

// Gradient method for strictly convex quadratics: x_{k+1} = x_k - beta_k g_k
// with g_k = A x_k - b, no line search and no safeguarding. beta_0 is a
// constant; subsequent stepsizes come from the stepsize engine with
// y_k = g_{k+1} - g_k (equal to A s_k, no extra apply). Stops when
// ||g_{k+1}|| <= tol ||g_0|| or after max_iter steps.

namespace tbbgrad {

struct QpSolverConfig {
  TargetStrategy strategy;
  double tol = 1e-6;
  long max_iter = 50000;
  double beta0 = 1.0;
  bool record_trace = true;
  bool record_gradients = false;  // debug: keep g_0..g_N for recursion checks
};

RunTrace solve_quadratic(const QuadraticProblem& p, const QpSolverConfig& cfg);

// Checks ||g_{k+1} - (I - beta_k A) g_k|| <= rel_tol ||g_k|| on a trace
// recorded with record_gradients. Returns the largest violation ratio.
double gradient_recursion_residual(const QuadraticProblem& p, const RunTrace& trace);
bool verify_gradient_recursion(const QuadraticProblem& p, const RunTrace& trace,
                               double rel_tol = 1e-10);

// Spectral bound audit for a completed run: fraction of steps k >= 1 whose
// inverse stepsize alpha_k lies in [xi_low*lambda1, xi_up*lambda_n]. The
// bracket test uses 1e-8 relative slack: alpha_k is computed from the
// difference y = g_{k+1} - g_k, whose cancellation near convergence can push
// an exactly-bounded Rayleigh quotient marginally outside the interval.
struct Assumption1Report {
  double fraction = 0.0;   // in-bracket share of audited steps
  double min_alpha_over_lambda1 = 0.0;
  double max_alpha_over_lambda_n = 0.0;
  long checked = 0;
};

Assumption1Report assumption1_check(const RunTrace& trace, double lambda1, double lambda_n,
                                    double xi_low, double xi_up);

}  // namespace tbbgrad
