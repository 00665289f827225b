#include "tbbgrad/trace.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace tbbgrad {

std::string status_str(RunStatus s) {
  switch (s) {
    case RunStatus::Converged:
      return "converged";
    case RunStatus::MaxIter:
      return "max_iter";
    case RunStatus::Error:
      return "error";
  }
  return "?";
}

namespace {

std::string num_or_na(double v) { return std::isnan(v) ? "na" : fmt_num(v); }

}  // namespace

void write_trace_csv(std::ostream& out, const RunTrace& trace, bool line_search_columns) {
  out << "k,beta,alpha,tau,gnorm,fval,source";
  if (line_search_columns) out << ",nu,backtracks,replaced";
  out << "\n";
  for (const auto& r : trace.rows) {
    out << r.k << ',' << num_or_na(r.beta) << ',' << num_or_na(r.alpha) << ',' << r.tau.str()
        << ',' << fmt_num(r.g_norm) << ',' << fmt_num(r.f) << ',' << source_str(r.source);
    if (line_search_columns)
      out << ',' << num_or_na(r.nu) << ',' << r.backtracks << ',' << (r.replaced ? 1 : 0);
    out << "\n";
  }
}

void write_trace_csv_file(const std::string& path, const RunTrace& trace,
                          bool line_search_columns) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open trace output file '" + path + "'");
  write_trace_csv(out, trace, line_search_columns);
}

}  // namespace tbbgrad
