#pragma once

#include <cmath>
#include <cstddef>
#include <random>

#include "tbbgrad/problems.hpp"
#include "tbbgrad/stepsize.hpp"
#include "tbbgrad/types.hpp"

namespace test_helpers {

using tbbgrad::Vec;

inline Vec random_vec(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vec v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

// Log-uniform positive entries, handy for synthetic spectra.
inline Vec random_log_uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(std::log(lo), std::log(hi));
  Vec v(n);
  for (auto& x : v) x = std::exp(dist(rng));
  return v;
}

// Secant context for A = diag(d) and step s, i.e. y = A s.
inline tbbgrad::StepContext diag_context(const Vec& d, const Vec& s, long k = 1,
                                         double g_norm = 1.0) {
  Vec y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) y[i] = d[i] * s[i];
  tbbgrad::StepContext ctx;
  ctx.update(s, y, k, g_norm);
  return ctx;
}

// Largest component error of the analytic gradient against a central
// difference, scaled by max(1, |g_i|). The uniform h keeps the stencil well
// conditioned across the collection's value ranges.
inline double fd_gradient_max_err(const tbbgrad::NonlinearProblem& p, const Vec& x) {
  double xmax = 0.0;
  for (double v : x) xmax = std::max(xmax, std::abs(v));
  const double h = 1e-6 * (1.0 + xmax);

  Vec g(x.size());
  p.gradient(x, g);

  Vec probe = x;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = p.value(probe);
    probe[i] = x[i] - h;
    const double fm = p.value(probe);
    probe[i] = x[i];
    const double fd = (fp - fm) / (2.0 * h);
    worst = std::max(worst, std::abs(g[i] - fd) / std::max(1.0, std::abs(g[i])));
  }
  return worst;
}

}  // namespace test_helpers
