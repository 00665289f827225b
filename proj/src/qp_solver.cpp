#include "tbbgrad/qp_solver.hpp"

#include <cmath>
#include <limits>

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
  t.rows.push_back(row);
}

}  // namespace

RunTrace solve_quadratic(const QuadraticProblem& p, const QpSolverConfig& cfg) {
  p.counters().reset();
  const std::size_t n = static_cast<std::size_t>(p.dim());
  RunTrace trace;

  Vec x = p.x0();
  Vec g(n), g_new(n), s(n), y(n), ag(n);
  double f = p.value_and_gradient(x, g);
  const double g0_norm = kernels::nrm2(g);
  trace.g0_norm = g0_norm;
  if (cfg.record_gradients) trace.gradients.push_back(g);

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

  double beta = cfg.beta0;
  Target tau = Target::na();
  StepSource source = StepSource::Initial;
  double g_norm = g0_norm;
  StepContext ctx;

  trace.status = RunStatus::MaxIter;
  long k = 0;
  for (; k < cfg.max_iter; ++k) {
    if (cfg.record_trace) {
      TraceRow row;
      row.k = k;
      row.beta = beta;
      row.alpha = 1.0 / beta;
      row.tau = tau;
      row.g_norm = g_norm;
      row.f = f;
      row.source = source;
      trace.rows.push_back(row);
    }

    // One operator apply per iteration: g and f advance by the gradient
    // recursion g_{k+1} = g_k - beta_k A g_k, so the recorded gradients
    // satisfy it to roundoff regardless of scale.
    p.op().apply(g, ag);
    const double gg = g_norm * g_norm;
    const double gag = kernels::dot(g, ag);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = -beta * g[i];
      x[i] += s[i];
      g_new[i] = g[i] - beta * ag[i];
    }
    const double f_new = f - beta * gg + 0.5 * beta * beta * gag;
    // The fused apply yields both the new objective and gradient: count one
    // evaluation of each so grid costs stay comparable across solvers.
    ++p.counters().n_f;
    ++p.counters().n_g;
    if (cfg.record_gradients) trace.gradients.push_back(g_new);
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
    if (sty <= 0.0) {
      trace.status = RunStatus::Error;
      trace.message = "s'y = " + fmt_num(sty) + " at iteration " + std::to_string(k) +
                      ": operator is not positive definite along the step";
      f = f_new;
      g_norm = g_new_norm;
      ++k;
      break;
    }

    ctx.update(s, y, k + 1, g_new_norm);
    const StepDecision dec = compute_step(cfg.strategy, ctx);
    if (!std::isfinite(dec.beta) || dec.beta <= 0.0) {
      trace.status = RunStatus::Error;
      trace.message = "stepsize " + fmt_num(dec.beta) + " at iteration " + std::to_string(k + 1) +
                      " is not a finite positive number";
      f = f_new;
      g_norm = g_new_norm;
      ++k;
      break;
    }
    beta = dec.beta;
    tau = dec.tau;
    source = dec.source;
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

double gradient_recursion_residual(const QuadraticProblem& p, const RunTrace& trace) {
  if (trace.gradients.size() < 2 || trace.rows.size() < trace.gradients.size())
    return 0.0;
  const std::size_t n = static_cast<std::size_t>(p.dim());
  Vec ag(n);
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < trace.gradients.size(); ++k) {
    const Vec& gk = trace.gradients[k];
    const Vec& gk1 = trace.gradients[k + 1];
    const double beta = trace.rows[k].beta;
    p.op().apply(gk, ag);
    double diff_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = gk1[i] - (gk[i] - beta * ag[i]);
      diff_sq += r * r;
    }
    const double gk_norm = kernels::nrm2(gk);
    if (gk_norm > 0.0) worst = std::max(worst, std::sqrt(diff_sq) / gk_norm);
  }
  return worst;
}

bool verify_gradient_recursion(const QuadraticProblem& p, const RunTrace& trace,
                               double rel_tol) {
  return gradient_recursion_residual(p, trace) <= rel_tol;
}

Assumption1Report assumption1_check(const RunTrace& trace, double lambda1, double lambda_n,
                                    double xi_low, double xi_up) {
  Assumption1Report rep;
  const double lo = xi_low * lambda1;
  const double hi = xi_up * lambda_n;
  double min_lo = std::numeric_limits<double>::infinity();
  double max_hi = -std::numeric_limits<double>::infinity();
  long in_bracket = 0;
  for (const auto& row : trace.rows) {
    if (row.k < 1 || row.source == StepSource::Terminal || row.source == StepSource::Initial)
      continue;
    const double alpha = row.alpha;
    if (alpha >= lo * (1.0 - 1e-8) && alpha <= hi * (1.0 + 1e-8)) ++in_bracket;
    min_lo = std::min(min_lo, alpha / lambda1);
    max_hi = std::max(max_hi, alpha / lambda_n);
    ++rep.checked;
  }
  rep.fraction = rep.checked == 0 ? 1.0 : static_cast<double>(in_bracket) / rep.checked;
  rep.min_alpha_over_lambda1 = rep.checked == 0 ? 0.0 : min_lo;
  rep.max_alpha_over_lambda_n = rep.checked == 0 ? 0.0 : max_hi;
  return rep;
}

}  // namespace tbbgrad
