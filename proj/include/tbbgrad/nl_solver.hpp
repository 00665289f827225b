#pragma once

#include <span>

#include "tbbgrad/problems.hpp"
#include "tbbgrad/stepsize.hpp"
#include "tbbgrad/trace.hpp"

// Gradient method for general smooth objectives: nonmonotone backtracking
// line search over the last `memory` objective values, stepsize from the
// stepsize engine when the secant pair has positive curvature, replacement
// stepsize otherwise, and safeguarding into [beta_min, beta_max].

namespace tbbgrad {

struct NlSolverConfig {
  TargetStrategy strategy;
  double tol = 1e-6;
  long max_iter = 50000;
  double beta0 = 1.0;
  bool beta0_inv_gnorm = false;  // start from 1/||g_0|| instead of beta0
  double beta_min = 1e-30;
  double beta_max = 1e30;
  double ls_c = 1e-4;      // sufficient-decrease constant
  double ls_sigma = 0.5;   // backtracking factor
  int memory = 10;         // nonmonotone window M
  int max_backtracks = 100;
  ReplacementRule replacement = ReplacementRule::Raydan;
  bool record_trace = true;
};

struct LineSearchResult {
  double nu = 0.0;     // accepted stepsize; equals beta * ls_sigma^backtracks
  int backtracks = 0;
  double f_new = 0.0;  // objective at x - nu g
};

// Backtracks nu from beta until f(x - nu g) <= max(f_history) - ls_c nu ||g||^2.
// Counts one objective evaluation per trial. Non-finite trial values are
// treated as rejections. Throws LineSearchError after max_backtracks
// reductions; std::invalid_argument when f_history is empty.
LineSearchResult gll_line_search(const NonlinearProblem& p, std::span<const double> x,
                                 std::span<const double> g, double beta,
                                 std::span<const double> f_history, const NlSolverConfig& cfg);

RunTrace solve_nonlinear(const NonlinearProblem& p, const NlSolverConfig& cfg);

}  // namespace tbbgrad
