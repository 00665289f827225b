#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tbbgrad/stepsize.hpp"
#include "tbbgrad/types.hpp"

namespace tbbgrad {

enum class RunStatus { Converged, MaxIter, Error };

std::string status_str(RunStatus s);

// One row per visited iterate. Rows 0..iterations-1 describe the step taken
// from that iterate (beta, target, line-search data); the final row carries
// the terminal iterate's gradient norm and objective with source=terminal
// and no step fields, so convergence is auditable from the trace alone.
struct TraceRow {
  long k = 0;
  double beta = 0.0;   // NaN on the terminal row (rendered "na")
  double alpha = 0.0;  // 1/beta
  Target tau = Target::na();
  double g_norm = 0.0;
  double f = 0.0;
  StepSource source = StepSource::Initial;
  // Nonlinear solver extras; unused rows keep the defaults.
  double nu = 0.0;
  int backtracks = 0;
  bool replaced = false;
};

struct RunTrace {
  std::vector<TraceRow> rows;  // empty when tracing is disabled
  RunStatus status = RunStatus::Error;
  long iterations = 0;
  long n_f = 0;
  long n_g = 0;
  double g0_norm = 0.0;
  double final_g_norm = 0.0;
  double final_f = 0.0;
  std::string message;
  // Gradient iterates g_0..g_N, recorded only on request.
  std::vector<Vec> gradients;
};

// Columns: k,beta,alpha,tau,gnorm,fval,source and, with line-search columns,
// nu,backtracks,replaced. tau renders as +inf/-inf/na; the terminal row's
// beta/alpha render as na.
void write_trace_csv(std::ostream& out, const RunTrace& trace, bool line_search_columns);
void write_trace_csv_file(const std::string& path, const RunTrace& trace,
                          bool line_search_columns);

}  // namespace tbbgrad
