#include "tbbgrad/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tbbgrad/types.hpp"

namespace tbbgrad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_unique_labels(const std::vector<std::string>& labels) {
  std::set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second)
      throw std::invalid_argument("duplicate problem label '" + l + "'");
}

std::string csv_safe(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n') c = ';';
  return s;
}

std::string num_or_na(double v) { return std::isnan(v) ? "na" : fmt_num(v); }

double median_of_sorted(const std::vector<double>& v) {
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

RunRecord make_record(std::string problem, std::string strategy, const RunTrace& t) {
  RunRecord r;
  r.problem = std::move(problem);
  r.strategy = std::move(strategy);
  r.status = t.status;
  r.iterations = t.iterations;
  r.n_f = t.n_f;
  r.n_g = t.n_g;
  r.final_g_norm = t.final_g_norm;
  r.final_f = t.final_f;
  r.message = t.message;
  return r;
}

RunRecord error_record(std::string problem, std::string strategy, const char* what) {
  RunRecord r;
  r.problem = std::move(problem);
  r.strategy = std::move(strategy);
  r.status = RunStatus::Error;
  r.message = what;
  return r;
}

struct GridShape {
  std::size_t np = 0;
  std::size_t ns = 0;
};

GridShape init_grid(GridResult& out, const std::vector<std::string>& problems,
                    const std::vector<TargetStrategy>& strategies) {
  require_unique_labels(problems);
  std::vector<std::string> strategy_names;
  strategy_names.reserve(strategies.size());
  for (const auto& s : strategies) strategy_names.push_back(s.str());
  require_unique_labels(strategy_names);

  const GridShape shape{problems.size(), strategies.size()};
  for (CostMatrix* m : {&out.iterations, &out.nfe}) {
    m->problems = problems;
    m->strategies = strategy_names;
    m->cost.assign(shape.np, std::vector<double>(shape.ns, fail_cost()));
  }
  out.runs.resize(shape.np * shape.ns);
  return shape;
}

void store_cell(GridResult& out, const GridShape& shape, std::size_t idx, RunRecord rec) {
  const std::size_t p = idx / shape.ns, s = idx % shape.ns;
  if (rec.status == RunStatus::Converged) {
    out.iterations.cost[p][s] = static_cast<double>(rec.iterations);
    out.nfe.cost[p][s] = static_cast<double>(rec.n_f);
  }
  out.runs[idx] = std::move(rec);
}

template <typename CellFn>
void for_each_cell(std::size_t total, int workers, const CellFn& cell) {
#ifdef _OPENMP
  if (workers > 1) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for num_threads(workers) schedule(dynamic)
    for (std::ptrdiff_t idx = 0; idx < n; ++idx) cell(static_cast<std::size_t>(idx));
    return;
  }
#else
  (void)workers;
#endif
  for (std::size_t idx = 0; idx < total; ++idx) cell(idx);
}

}  // namespace

double fail_cost() { return std::numeric_limits<double>::quiet_NaN(); }

bool is_fail(double cost) { return std::isnan(cost); }

std::vector<std::vector<double>> performance_ratios(const CostMatrix& costs) {
  std::vector<std::vector<double>> ratios(costs.cost.size());
  for (std::size_t p = 0; p < costs.cost.size(); ++p) {
    double best = kInf;
    for (double c : costs.cost[p])
      if (!is_fail(c)) best = std::min(best, c);
    if (!std::isfinite(best))
      throw std::runtime_error("performance ratios: every strategy failed on problem '" +
                               costs.problems[p] + "'");
    ratios[p].reserve(costs.cost[p].size());
    for (double c : costs.cost[p]) ratios[p].push_back(is_fail(c) ? kInf : c / best);
  }
  return ratios;
}

ProfileCurve profile_curve(const std::vector<std::vector<double>>& ratios, std::size_t strategy,
                           std::string name) {
  ProfileCurve curve;
  curve.strategy = std::move(name);
  std::vector<double> finite;
  for (const auto& row : ratios)
    if (std::isfinite(row[strategy])) finite.push_back(row[strategy]);
  std::sort(finite.begin(), finite.end());

  std::vector<double> breakpoints{1.0};
  breakpoints.insert(breakpoints.end(), finite.begin(), finite.end());
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  const double total = ratios.empty() ? 1.0 : static_cast<double>(ratios.size());
  for (double t : breakpoints) {
    const auto solved = std::upper_bound(finite.begin(), finite.end(), t) - finite.begin();
    curve.t.push_back(t);
    curve.rho.push_back(static_cast<double>(solved) / total);
  }
  return curve;
}

std::vector<ProfileCurve> profile_curves(const CostMatrix& costs) {
  const auto ratios = performance_ratios(costs);
  std::vector<ProfileCurve> curves;
  curves.reserve(costs.strategies.size());
  for (std::size_t s = 0; s < costs.strategies.size(); ++s)
    curves.push_back(profile_curve(ratios, s, costs.strategies[s]));
  return curves;
}

std::vector<SummaryRow> summary_table(const CostMatrix& costs) {
  const auto ratios = performance_ratios(costs);
  const double total = static_cast<double>(costs.problems.size());
  std::vector<SummaryRow> rows;
  rows.reserve(costs.strategies.size());
  for (std::size_t s = 0; s < costs.strategies.size(); ++s) {
    SummaryRow row;
    row.strategy = costs.strategies[s];
    std::vector<double> finite;
    long pr1 = 0;
    for (const auto& r : ratios) {
      if (std::isfinite(r[s])) finite.push_back(r[s]);
      if (r[s] == 1.0) ++pr1;
    }
    row.solved_pct = 100.0 * static_cast<double>(finite.size()) / total;
    row.pr1_pct = 100.0 * static_cast<double>(pr1) / total;
    if (finite.empty()) {
      row.avg_pr = row.sd_pr = row.min_pr = row.max_pr = fail_cost();
    } else {
      const double mean =
          std::accumulate(finite.begin(), finite.end(), 0.0) / static_cast<double>(finite.size());
      double var = 0.0;
      for (double r : finite) var += (r - mean) * (r - mean);
      var /= static_cast<double>(finite.size());
      row.avg_pr = mean;
      row.sd_pr = std::sqrt(var);
      row.min_pr = *std::min_element(finite.begin(), finite.end());
      row.max_pr = *std::max_element(finite.begin(), finite.end());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

GridResult run_quad_grid(const std::vector<QuadraticProblem>& problems,
                         const std::vector<TargetStrategy>& strategies,
                         const QpSolverConfig& cfg, int workers) {
  GridResult out;
  std::vector<std::string> labels;
  labels.reserve(problems.size());
  for (const auto& p : problems) labels.push_back(p.name());
  const GridShape shape = init_grid(out, labels, strategies);

  for_each_cell(shape.np * shape.ns, workers, [&](std::size_t idx) {
    const std::size_t p = idx / shape.ns, s = idx % shape.ns;
    QuadraticProblem problem = problems[p];
    QpSolverConfig run_cfg = cfg;
    run_cfg.strategy = strategies[s];
    run_cfg.record_trace = false;
    run_cfg.record_gradients = false;
    try {
      store_cell(out, shape, idx,
                 make_record(labels[p], out.iterations.strategies[s],
                             solve_quadratic(problem, run_cfg)));
    } catch (const std::exception& e) {
      store_cell(out, shape, idx,
                 error_record(labels[p], out.iterations.strategies[s], e.what()));
    }
  });
  return out;
}

std::vector<NlCase> make_nl_cases(const std::vector<NonlinearProblem>& functions,
                                  const std::vector<double>& x0_multipliers,
                                  const std::vector<double>& tols) {
  if (x0_multipliers.empty() || tols.empty())
    throw std::invalid_argument("nl cases need at least one starting point and one tolerance");
  std::vector<NlCase> cases;
  cases.reserve(functions.size() * x0_multipliers.size() * tols.size());
  for (const auto& fn : functions)
    for (double mult : x0_multipliers)
      for (double tol : tols) {
        NlCase c{fn.with_x0_multiplier(mult), tol,
                 fn.name() + "_x" + fmt_num(mult) + "_tol" + fmt_num(tol)};
        cases.push_back(std::move(c));
      }
  return cases;
}

GridResult run_nl_grid(const std::vector<NlCase>& cases,
                       const std::vector<TargetStrategy>& strategies, const NlSolverConfig& cfg,
                       int workers) {
  GridResult out;
  std::vector<std::string> labels;
  labels.reserve(cases.size());
  for (const auto& c : cases) labels.push_back(c.label);
  const GridShape shape = init_grid(out, labels, strategies);

  for_each_cell(shape.np * shape.ns, workers, [&](std::size_t idx) {
    const std::size_t p = idx / shape.ns, s = idx % shape.ns;
    NlSolverConfig run_cfg = cfg;
    run_cfg.strategy = strategies[s];
    run_cfg.tol = cases[p].tol;
    run_cfg.record_trace = false;
    try {
      store_cell(out, shape, idx,
                 make_record(labels[p], out.iterations.strategies[s],
                             solve_nonlinear(cases[p].problem, run_cfg)));
    } catch (const std::exception& e) {
      store_cell(out, shape, idx,
                 error_record(labels[p], out.iterations.strategies[s], e.what()));
    }
  });
  return out;
}

std::vector<ExcludedProblem> detect_multi_minimum(const GridResult& grid, double rel_tol) {
  const std::size_t ns = grid.iterations.strategies.size();
  std::vector<ExcludedProblem> out;
  for (std::size_t p = 0; p < grid.iterations.problems.size(); ++p) {
    std::vector<double> finals;
    for (std::size_t s = 0; s < ns; ++s) {
      const RunRecord& r = grid.runs[p * ns + s];
      if (r.status == RunStatus::Converged) finals.push_back(r.final_f);
    }
    if (finals.size() < 2) continue;
    std::sort(finals.begin(), finals.end());
    const double median = median_of_sorted(finals);
    const double spread = finals.back() - finals.front();
    if (spread > rel_tol * (1.0 + std::abs(median)))
      out.push_back({grid.iterations.problems[p], "multi_minimum", spread, median});
  }
  return out;
}

std::vector<std::string> all_failed_rows(const CostMatrix& costs) {
  std::vector<std::string> out;
  for (std::size_t p = 0; p < costs.cost.size(); ++p) {
    bool any = false;
    for (double c : costs.cost[p]) any = any || !is_fail(c);
    if (!any) out.push_back(costs.problems[p]);
  }
  return out;
}

CostMatrix remove_rows(const CostMatrix& costs, const std::vector<std::string>& rows) {
  const std::set<std::string> drop(rows.begin(), rows.end());
  CostMatrix out;
  out.strategies = costs.strategies;
  for (std::size_t p = 0; p < costs.problems.size(); ++p) {
    if (drop.count(costs.problems[p])) continue;
    out.problems.push_back(costs.problems[p]);
    out.cost.push_back(costs.cost[p]);
  }
  return out;
}

SweepResult sweep_experiment(const QuadraticProblem& p,
                             const std::vector<TargetStrategy>& strategies,
                             const QpSolverConfig& cfg) {
  const auto eig = p.extreme_eigenvalues();
  if (!eig)
    throw std::invalid_argument("sweep requires a problem with recorded extreme eigenvalues");

  struct Entry {
    std::string name;
    long iterations;
    RunTrace trace;
  };
  std::vector<Entry> entries;
  entries.reserve(strategies.size());
  for (const auto& st : strategies) {
    QpSolverConfig run_cfg = cfg;
    run_cfg.strategy = st;
    run_cfg.record_trace = true;
    QuadraticProblem problem = p;
    RunTrace trace = solve_quadratic(problem, run_cfg);
    if (trace.status == RunStatus::Error)
      throw std::runtime_error("sweep: strategy '" + st.str() + "' failed on '" + p.name() +
                               "': " + trace.message);
    entries.push_back({st.str(), trace.iterations, std::move(trace)});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.iterations != b.iterations ? a.iterations < b.iterations : a.name < b.name;
  });

  SweepResult out;
  for (auto& e : entries) {
    out.strategies.push_back(std::move(e.name));
    out.iterations.push_back(e.iterations);
    out.traces.push_back(std::move(e.trace));
  }
  const auto [l1, ln] = *eig;
  out.spectrum.resize(21);
  for (int i = 0; i <= 20; ++i)
    out.spectrum[i] = l1 + (ln - l1) * static_cast<double>(i) / 20.0;
  out.spectrum.front() = l1;
  out.spectrum.back() = ln;
  return out;
}

void write_costs_csv(std::ostream& out, const CostMatrix& costs) {
  out << "problem";
  for (const auto& s : costs.strategies) out << "," << s;
  out << "\n";
  for (std::size_t p = 0; p < costs.problems.size(); ++p) {
    out << costs.problems[p];
    for (double c : costs.cost[p]) out << "," << (is_fail(c) ? "FAIL" : fmt_num(c));
    out << "\n";
  }
}

void write_profile_csv(std::ostream& out, const std::vector<ProfileCurve>& curves, double t_max) {
  if (t_max < 1.0) throw std::invalid_argument("profile window must end at t >= 1");
  out << "strategy,t,rho\n";
  for (const auto& curve : curves) {
    double last_t = 0.0, last_rho = 0.0;
    for (std::size_t i = 0; i < curve.t.size(); ++i) {
      if (curve.t[i] > t_max) break;
      out << curve.strategy << "," << fmt_num(curve.t[i]) << "," << fmt_num(curve.rho[i]) << "\n";
      last_t = curve.t[i];
      last_rho = curve.rho[i];
    }
    if (last_t < t_max)
      out << curve.strategy << "," << fmt_num(t_max) << "," << fmt_num(last_rho) << "\n";
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "strategy,solved_pct,pr1_pct,avg_pr,sd_pr,min_pr,max_pr\n";
  for (const auto& r : rows) {
    out << r.strategy << "," << fmt_num(r.solved_pct) << "," << fmt_num(r.pr1_pct) << ","
        << num_or_na(r.avg_pr) << "," << num_or_na(r.sd_pr) << "," << num_or_na(r.min_pr) << ","
        << num_or_na(r.max_pr) << "\n";
  }
}

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs) {
  out << "problem,strategy,status,iterations,nf,ng,final_gnorm,final_f,message\n";
  for (const auto& r : runs) {
    out << r.problem << "," << r.strategy << "," << status_str(r.status) << "," << r.iterations
        << "," << r.n_f << "," << r.n_g << "," << fmt_num(r.final_g_norm) << ","
        << fmt_num(r.final_f) << "," << csv_safe(r.message) << "\n";
  }
}

void write_excluded_csv(std::ostream& out, const std::vector<ExcludedProblem>& rows) {
  out << "problem,reason,spread,median\n";
  for (const auto& r : rows)
    out << r.problem << "," << r.reason << "," << fmt_num(r.spread) << "," << fmt_num(r.median)
        << "\n";
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "k,strategy,alpha\n";
  for (std::size_t i = 0; i < sweep.strategies.size(); ++i)
    for (const auto& row : sweep.traces[i].rows) {
      if (row.k < 1 || row.source == StepSource::Terminal) continue;
      out << row.k << "," << sweep.strategies[i] << "," << fmt_num(row.alpha) << "\n";
    }
}

void write_sweep_spectrum_csv(std::ostream& out, const SweepResult& sweep) {
  out << "index,lambda\n";
  for (std::size_t i = 0; i < sweep.spectrum.size(); ++i)
    out << i << "," << fmt_num(sweep.spectrum[i]) << "\n";
}

}  // namespace tbbgrad
