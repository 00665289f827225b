#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tbbgrad/nl_solver.hpp"
#include "tbbgrad/problems.hpp"
#include "tbbgrad/qp_solver.hpp"
#include "tbbgrad/stepsize.hpp"
#include "tbbgrad/trace.hpp"

// Experiment orchestration: strategy x problem grids, performance profiles
// (Dolan-More), summary statistics, and inverse-stepsize sweep traces.

namespace tbbgrad {

// Failed cells are stored as NaN, rendered as "FAIL" in CSV, and treated as
// an infinite performance ratio.
double fail_cost();
bool is_fail(double cost);

struct CostMatrix {
  std::vector<std::string> problems;    // row labels
  std::vector<std::string> strategies;  // column labels
  std::vector<std::vector<double>> cost;  // cost[problem][strategy]
};

// r[p][s] = cost[p][s] / min over finite entries of row p; FAIL -> +inf, so
// failed cells never produce the row minimum. Throws std::runtime_error
// naming the problem when a row has no finite entry.
std::vector<std::vector<double>> performance_ratios(const CostMatrix& costs);

// Cumulative share of problems a strategy solved within ratio t.
struct ProfileCurve {
  std::string strategy;
  std::vector<double> t;    // breakpoints, deduplicated, starting at 1
  std::vector<double> rho;  // nondecreasing, bounded by the solved fraction
};

ProfileCurve profile_curve(const std::vector<std::vector<double>>& ratios, std::size_t strategy,
                           std::string name);
std::vector<ProfileCurve> profile_curves(const CostMatrix& costs);

// Per-strategy row: share of problems solved, share solved at the row
// minimum, and moments of the finite performance ratios (failed problems
// enter solved_pct only). Ratio statistics are NaN when nothing was solved.
struct SummaryRow {
  std::string strategy;
  double solved_pct = 0.0;
  double pr1_pct = 0.0;
  double avg_pr = 0.0;
  double sd_pr = 0.0;  // population standard deviation
  double min_pr = 0.0;
  double max_pr = 0.0;
};

std::vector<SummaryRow> summary_table(const CostMatrix& costs);

// One grid cell outcome.
struct RunRecord {
  std::string problem;
  std::string strategy;
  RunStatus status = RunStatus::Error;
  long iterations = 0;
  long n_f = 0;
  long n_g = 0;
  double final_g_norm = 0.0;
  double final_f = 0.0;
  std::string message;
};

// Grid outcome: the same runs costed two ways. Iteration count is the
// primary metric for quadratics, objective evaluations for nonlinear
// problems; both are always recorded. runs is problem-major, strategy-minor.
struct GridResult {
  CostMatrix iterations;
  CostMatrix nfe;
  std::vector<RunRecord> runs;
};

// Cells run in parallel up to `workers`; each cell owns a problem copy and a
// preassigned result slot, so output does not depend on scheduling.
GridResult run_quad_grid(const std::vector<QuadraticProblem>& problems,
                         const std::vector<TargetStrategy>& strategies,
                         const QpSolverConfig& cfg, int workers = 1);

// A nonlinear row: one function instance at one starting point and one
// stopping tolerance.
struct NlCase {
  NonlinearProblem problem;
  double tol;
  std::string label;
};

std::vector<NlCase> make_nl_cases(const std::vector<NonlinearProblem>& functions,
                                  const std::vector<double>& x0_multipliers,
                                  const std::vector<double>& tols);

GridResult run_nl_grid(const std::vector<NlCase>& cases,
                       const std::vector<TargetStrategy>& strategies, const NlSolverConfig& cfg,
                       int workers = 1);

// Rows dropped before profile computation, with the evidence.
struct ExcludedProblem {
  std::string problem;
  std::string reason;  // "multi_minimum" or "all_failed"
  double spread = 0.0;
  double median = 0.0;
};

// Flags rows whose converged runs disagree on the final objective by more
// than rel_tol * (1 + |median|): the strategies reached different stationary
// points, so cost ratios are not comparable.
std::vector<ExcludedProblem> detect_multi_minimum(const GridResult& grid, double rel_tol = 1e-3);

// Rows with no finite entry; performance_ratios rejects these.
std::vector<std::string> all_failed_rows(const CostMatrix& costs);

CostMatrix remove_rows(const CostMatrix& costs, const std::vector<std::string>& rows);

// Inverse-stepsize traces across the spectrum for one problem, strategies
// ordered by iteration count (name breaks ties), plus 21 equally spaced
// eigenvalue reference lines from lambda_1 to lambda_n.
struct SweepResult {
  std::vector<std::string> strategies;
  std::vector<long> iterations;
  std::vector<RunTrace> traces;
  std::vector<double> spectrum;
};

// Requires recorded extreme eigenvalues; throws std::runtime_error when a
// strategy ends in a solver error.
SweepResult sweep_experiment(const QuadraticProblem& p,
                             const std::vector<TargetStrategy>& strategies,
                             const QpSolverConfig& cfg);

// CSV emitters. Headers included; "." decimal separator; "\n" line ends.
void write_costs_csv(std::ostream& out, const CostMatrix& costs);
// Step-function rows (strategy, t, rho) windowed to t in [1, t_max], with a
// closing row at t_max repeating the last value inside the window.
void write_profile_csv(std::ostream& out, const std::vector<ProfileCurve>& curves,
                       double t_max = 3.0);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs);
void write_excluded_csv(std::ostream& out, const std::vector<ExcludedProblem>& rows);
// Rows (k, strategy, alpha) for k >= 1: the stepsizes the strategy chose,
// not the arbitrary beta_0.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
void write_sweep_spectrum_csv(std::ostream& out, const SweepResult& sweep);

}  // namespace tbbgrad
