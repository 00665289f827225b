#include "tbbgrad/nl_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tbbgrad/errors.hpp"
#include "tbbgrad/kernels.hpp"

namespace tbbgrad {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void push_terminal(RunTrace& t, bool record, long k, double g_norm, double f) {
  if (!record) return;
  TraceRow row;
  row.k = k;
  row.beta = kNaN;
  row.alpha = kNaN;
  row.tau = Target::na();
  row.g_norm = g_norm;
  row.f = f;
  row.source = StepSource::Terminal;
  row.nu = kNaN;
  t.rows.push_back(row);
}

bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

LineSearchResult gll_line_search(const NonlinearProblem& p, std::span<const double> x,
                                 std::span<const double> g, double beta,
                                 std::span<const double> f_history, const NlSolverConfig& cfg) {
  if (f_history.empty())
    throw std::invalid_argument("gll_line_search: objective history is empty");
  const double f_ref = *std::max_element(f_history.begin(), f_history.end());
  const double gg = kernels::dot(g, g);

  Vec trial(x.size());
  double nu = beta;
  int backtracks = 0;
  for (;;) {
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - nu * g[i];
    const double f_t = p.value(trial);
    // A NaN trial value fails the test and backtracks like any other reject.
    if (f_t <= f_ref - cfg.ls_c * nu * gg) return {nu, backtracks, f_t};
    ++backtracks;
    if (backtracks > cfg.max_backtracks)
      throw LineSearchError("no sufficient decrease after " +
                            std::to_string(cfg.max_backtracks) +
                            " backtracks from stepsize " + fmt_num(beta));
    nu *= cfg.ls_sigma;
  }
}

RunTrace solve_nonlinear(const NonlinearProblem& problem, const NlSolverConfig& cfg) {
  NonlinearProblem p = problem;
  p.counters().reset();
  const std::size_t n = static_cast<std::size_t>(p.dim());
  RunTrace trace;

  auto fail = [&](long iters, double g_norm, double f, std::string msg) {
    trace.status = RunStatus::Error;
    trace.message = std::move(msg);
    trace.iterations = iters;
    trace.final_g_norm = g_norm;
    trace.final_f = f;
    push_terminal(trace, cfg.record_trace, iters, g_norm, f);
    trace.n_f = p.counters().n_f;
    trace.n_g = p.counters().n_g;
    return trace;
  };

  Vec x = p.x0();
  Vec g(n), g_new(n), s(n), y(n);
  p.gradient(x, g);
  if (!all_finite(g)) return fail(0, kNaN, kNaN, "gradient not finite at the starting point");

  // Optional objective scaling by the first gradient norm: the stored g is
  // rescaled in place, every later evaluation goes through the scaled copy.
  if (p.scale_by_g0()) {
    const double raw_norm = kernels::nrm2(g);
    if (raw_norm > 0.0) {
      p = p.scaled(1.0 / raw_norm);
      kernels::scal(1.0 / raw_norm, g);
    }
  }

  const double g0_norm = kernels::nrm2(g);
  trace.g0_norm = g0_norm;
  double f = p.value(x);
  if (!std::isfinite(f)) return fail(0, g0_norm, f, "objective not finite at the starting point");

  if (g0_norm == 0.0) {
    push_terminal(trace, cfg.record_trace, 0, 0.0, f);
    trace.status = RunStatus::Converged;
    trace.iterations = 0;
    trace.final_g_norm = 0.0;
    trace.final_f = f;
    trace.n_f = p.counters().n_f;
    trace.n_g = p.counters().n_g;
    return trace;
  }

  Vec f_history;
  f_history.reserve(static_cast<std::size_t>(cfg.memory));
  f_history.push_back(f);

  double beta = cfg.beta0_inv_gnorm ? 1.0 / g0_norm : cfg.beta0;
  Target tau = Target::na();
  StepSource source = StepSource::Initial;
  bool replaced = false;
  double g_norm = g0_norm;
  StepContext ctx;
  ctx.beta_prev = beta;

  trace.status = RunStatus::MaxIter;
  long k = 0;
  for (; k < cfg.max_iter; ++k) {
    LineSearchResult ls;
    try {
      ls = gll_line_search(p, x, g, beta, f_history, cfg);
    } catch (const LineSearchError& e) {
      return fail(k, g_norm, f, "line search failed at iteration " + std::to_string(k) + ": " +
                                    e.what());
    }
    if (cfg.record_trace) {
      TraceRow row;
      row.k = k;
      row.beta = beta;
      row.alpha = 1.0 / beta;
      row.tau = tau;
      row.g_norm = g_norm;
      row.f = f;
      row.source = source;
      row.nu = ls.nu;
      row.backtracks = ls.backtracks;
      row.replaced = replaced;
      trace.rows.push_back(row);
    }

    for (std::size_t i = 0; i < n; ++i) {
      s[i] = -ls.nu * g[i];
      x[i] += s[i];
    }
    const double f_new = ls.f_new;
    if (!std::isfinite(f_new))
      return fail(k + 1, g_norm, f_new,
                  "objective not finite at iteration " + std::to_string(k + 1));
    p.gradient(x, g_new);
    if (!all_finite(g_new))
      return fail(k + 1, kNaN, f_new,
                  "gradient not finite at iteration " + std::to_string(k + 1));
    const double g_new_norm = kernels::nrm2(g_new);

    if (g_new_norm <= cfg.tol * g0_norm) {
      trace.status = RunStatus::Converged;
      f = f_new;
      g_norm = g_new_norm;
      ++k;
      break;
    }

    for (std::size_t i = 0; i < n; ++i) y[i] = g_new[i] - g[i];
    const double sty = kernels::dot(s, y);

    double beta_next;
    Target tau_next = Target::na();
    StepSource source_next;
    bool replaced_next = false;
    if (sty <= 0.0) {
      beta_next = replacement_step(cfg.replacement, g_new_norm, beta, cfg.beta_max);
      source_next = StepSource::Replacement;
      replaced_next = true;
    } else {
      ctx.update(s, y, k + 1, g_new_norm);
      const StepDecision dec = compute_step(cfg.strategy, ctx);
      beta_next = dec.beta;
      tau_next = dec.tau;
      source_next = dec.source;
    }
    bool clamped = false;
    beta_next = safeguard(beta_next, cfg.beta_min, cfg.beta_max, &clamped);
    if (!std::isfinite(beta_next) || beta_next <= 0.0)
      return fail(k + 1, g_new_norm, f_new,
                  "stepsize " + fmt_num(beta_next) + " at iteration " + std::to_string(k + 1) +
                      " is not a finite positive number");
    if (clamped) source_next = StepSource::SafeguardClamped;

    f_history.push_back(f_new);
    if (f_history.size() > static_cast<std::size_t>(cfg.memory))
      f_history.erase(f_history.begin());

    beta = beta_next;
    tau = tau_next;
    source = source_next;
    replaced = replaced_next;
    ctx.beta_prev = beta;
    g.swap(g_new);
    g_norm = g_new_norm;
    f = f_new;
  }

  trace.iterations = k;
  trace.final_g_norm = g_norm;
  trace.final_f = f;
  push_terminal(trace, cfg.record_trace, k, g_norm, f);
  trace.n_f = p.counters().n_f;
  trace.n_g = p.counters().n_g;
  return trace;
}

}  // namespace tbbgrad
