#include <cmath>
#include <stdexcept>

#include "tbbgrad/testbed.hpp"

// Smooth test collection. Formulas follow the classical unconstrained
// collections (More-Garbow-Hillstrom; Andrei's collection; Raydan's strictly
// convex set); each builder records the exact formula used so any edition
// discrepancy is auditable against the comment, not guessed.

namespace tbbgrad {

namespace {

using Span = std::span<const double>;
using MutSpan = std::span<double>;

void require_even(const std::string& name, int n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument(name + ": dimension must be even and at least 2");
}

Vec alternating_x0(int n, double a, double b) {
  Vec x0(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x0[i] = (i % 2 == 0) ? a : b;
  return x0;
}

// f = sum over pairs [ 100 (x_{2i} - x_{2i-1}^2)^2 + (1 - x_{2i-1})^2 ],
// x0 pairs (-1.2, 1).
NonlinearProblem extended_rosenbrock(int n) {
  require_even("extended_rosenbrock", n);
  auto f = [](Span x) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      const double u = x[i], v = x[i + 1];
      const double t = v - u * u;
      acc += 100.0 * t * t + (1.0 - u) * (1.0 - u);
    }
    return acc;
  };
  auto g = [](Span x, MutSpan grad) {
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      const double u = x[i], v = x[i + 1];
      const double t = v - u * u;
      grad[i] = -400.0 * u * t - 2.0 * (1.0 - u);
      grad[i + 1] = 200.0 * t;
    }
  };
  return NonlinearProblem("extended_rosenbrock", n, f, g, alternating_x0(n, -1.2, 1.0));
}

// f = sum_{i<n} [ 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2 ], coupled chain,
// x0 alternating (-1.2, 1). Scaled by ||g0|| in the experiments.
NonlinearProblem generalized_rosenbrock(int n) {
  if (n < 2) throw std::invalid_argument("generalized_rosenbrock: dimension must be at least 2");
  auto f = [](Span x) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double t = x[i + 1] - x[i] * x[i];
      acc += 100.0 * t * t + (1.0 - x[i]) * (1.0 - x[i]);
    }
    return acc;
  };
  auto g = [](Span x, MutSpan grad) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) grad[i] = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double t = x[i + 1] - x[i] * x[i];
      grad[i] += -400.0 * x[i] * t - 2.0 * (1.0 - x[i]);
      grad[i + 1] += 200.0 * t;
    }
  };
  NonlinearProblem p("generalized_rosenbrock", n, f, g, alternating_x0(n, -1.2, 1.0));
  p.set_scale_by_g0(true);
  return p;
}

// f = sum over pairs [ (1.5 - u(1-v))^2 + (2.25 - u(1-v^2))^2 +
// (2.625 - u(1-v^3))^2 ], x0 pairs (1, 0.8).
NonlinearProblem extended_beale(int n) {
  require_even("extended_beale", n);
  auto f = [](Span x) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      const double u = x[i], v = x[i + 1];
      const double a = 1.5 - u * (1.0 - v);
      const double b = 2.25 - u * (1.0 - v * v);
      const double c = 2.625 - u * (1.0 - v * v * v);
      acc += a * a + b * b + c * c;
    }
    return acc;
  };
  auto g = [](Span x, MutSpan grad) {
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      const double u = x[i], v = x[i + 1];
      const double a = 1.5 - u * (1.0 - v);
      const double b = 2.25 - u * (1.0 - v * v);
      const double c = 2.625 - u * (1.0 - v * v * v);
      grad[i] = -2.0 * (a * (1.0 - v) + b * (1.0 - v * v) + c * (1.0 - v * v * v));
      grad[i + 1] = 2.0 * u * (a + 2.0 * b * v + 3.0 * c * v * v);
    }
  };
  return NonlinearProblem("extended_beale", n, f, g, alternating_x0(n, 1.0, 0.8));
}

// f = sum over pairs [ (u^2 + v - 11)^2 + (u + v^2 - 7)^2 ], x0 = e.
NonlinearProblem extended_himmelblau(int n) {
  require_even("extended_himmelblau", n);
  auto f = [](Span x) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      const double u = x[i], v = x[i + 1];
      const double p = u * u + v - 11.0;
      const double q = u + v * v - 7.0;
      acc += p * p + q * q;
    }
    return acc;
  };
  auto g = [](Span x, MutSpan grad) {
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      const double u = x[i], v = x[i + 1];
      const double p = u * u + v - 11.0;
      const double q = u + v * v - 7.0;
      grad[i] = 4.0 * u * p + 2.0 * q;
      grad[i + 1] = 2.0 * p + 4.0 * v * q;
    }
  };
  return NonlinearProblem("extended_himmelblau", n, f, g, Vec(static_cast<std::size_t>(n), 1.0));
}

// f = sum over pairs [ 100 (v - u^3)^2 + (1 - u)^2 ], x0 pairs (-1.2, 1).
NonlinearProblem extended_white_holst(int n) {
  require_even("extended_white_holst", n);
  auto f = [](Span x) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      const double u = x[i], v = x[i + 1];
      const double t = v - u * u * u;
      acc += 100.0 * t * t + (1.0 - u) * (1.0 - u);
    }
    return acc;
  };
  auto g = [](Span x, MutSpan grad) {
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      const double u = x[i], v = x[i + 1];
      const double t = v - u * u * u;
      grad[i] = -600.0 * u * u * t - 2.0 * (1.0 - u);
      grad[i + 1] = 200.0 * t;
    }
  };
  return NonlinearProblem("extended_white_holst", n, f, g, alternating_x0(n, -1.2, 1.0));
}

// f = sum_i (exp(x_i) - i x_i), x0 = (1/n) e. Strictly convex.
NonlinearProblem diagonal1(int n) {
  auto f = [](Span x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      acc += std::exp(x[i]) - static_cast<double>(i + 1) * x[i];
    return acc;
  };
  auto g = [](Span x, MutSpan grad) {
    for (std::size_t i = 0; i < x.size(); ++i)
      grad[i] = std::exp(x[i]) - static_cast<double>(i + 1);
  };
  NonlinearProblem p("diagonal1", n, f, g, Vec(static_cast<std::size_t>(n), 1.0 / n));
  p.set_convex(true);
  return p;
}

// f = sum_i (exp(x_i) - x_i / i), x0_i = 1/i. Strictly convex.
NonlinearProblem diagonal2(int n) {
  auto f = [](Span x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      acc += std::exp(x[i]) - x[i] / static_cast<double>(i + 1);
    return acc;
  };
  auto g = [](Span x, MutSpan grad) {
    for (std::size_t i = 0; i < x.size(); ++i)
      grad[i] = std::exp(x[i]) - 1.0 / static_cast<double>(i + 1);
  };
  Vec x0(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x0[i] = 1.0 / (i + 1);
  NonlinearProblem p("diagonal2", n, f, g, std::move(x0));
  p.set_convex(true);
  return p;
}

// f = sum_i (exp(x_i) - i sin(x_i)), x0 = e.
NonlinearProblem diagonal3(int n) {
  auto f = [](Span x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      acc += std::exp(x[i]) - static_cast<double>(i + 1) * std::sin(x[i]);
    return acc;
  };
  auto g = [](Span x, MutSpan grad) {
    for (std::size_t i = 0; i < x.size(); ++i)
      grad[i] = std::exp(x[i]) - static_cast<double>(i + 1) * std::cos(x[i]);
  };
  return NonlinearProblem("diagonal3", n, f, g, Vec(static_cast<std::size_t>(n), 1.0));
}

// f = sum over pairs 0.5 (u^2 + 100 v^2), x0 = e. Convex quadratic.
NonlinearProblem diagonal4(int n) {
  require_even("diagonal4", n);
  auto f = [](Span x) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2)
      acc += 0.5 * (x[i] * x[i] + 100.0 * x[i + 1] * x[i + 1]);
    return acc;
  };
  auto g = [](Span x, MutSpan grad) {
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      grad[i] = x[i];
      grad[i + 1] = 100.0 * x[i + 1];
    }
  };
  NonlinearProblem p("diagonal4", n, f, g, Vec(static_cast<std::size_t>(n), 1.0));
  p.set_convex(true);
  return p;
}

// f = sum_i (exp(x_i) - x_i), x0 = (1/n) e. Strictly convex, minimum at 0.
NonlinearProblem strictly_convex1(int n) {
  auto f = [](Span x) {
    double acc = 0.0;
    for (double v : x) acc += std::exp(v) - v;
    return acc;
  };
  auto g = [](Span x, MutSpan grad) {
    for (std::size_t i = 0; i < x.size(); ++i) grad[i] = std::exp(x[i]) - 1.0;
  };
  NonlinearProblem p("strictly_convex1", n, f, g, Vec(static_cast<std::size_t>(n), 1.0 / n));
  p.set_convex(true);
  return p;
}

// f = sum_i (i/10)(exp(x_i) - x_i), x0 = e. Strictly convex.
NonlinearProblem strictly_convex2(int n) {
  auto f = [](Span x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      acc += (static_cast<double>(i + 1) / 10.0) * (std::exp(x[i]) - x[i]);
    return acc;
  };
  auto g = [](Span x, MutSpan grad) {
    for (std::size_t i = 0; i < x.size(); ++i)
      grad[i] = (static_cast<double>(i + 1) / 10.0) * (std::exp(x[i]) - 1.0);
  };
  NonlinearProblem p("strictly_convex2", n, f, g, Vec(static_cast<std::size_t>(n), 1.0));
  p.set_convex(true);
  return p;
}

// f = sum over pairs [ (u + v - 3)^2 + (u - v + 1)^4 ], x0 = 2e. Convex.
NonlinearProblem extended_tridiagonal1(int n) {
  require_even("extended_tridiagonal1", n);
  auto f = [](Span x) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      const double a = x[i] + x[i + 1] - 3.0;
      const double b = x[i] - x[i + 1] + 1.0;
      acc += a * a + b * b * b * b;
    }
    return acc;
  };
  auto g = [](Span x, MutSpan grad) {
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      const double a = x[i] + x[i + 1] - 3.0;
      const double b = x[i] - x[i + 1] + 1.0;
      grad[i] = 2.0 * a + 4.0 * b * b * b;
      grad[i + 1] = 2.0 * a - 4.0 * b * b * b;
    }
  };
  NonlinearProblem p("extended_tridiagonal1", n, f, g, Vec(static_cast<std::size_t>(n), 2.0));
  p.set_convex(true);
  return p;
}

// f = sum_i i x_i^2 + (sum_i x_i)^2 / 100, x0 = 0.5 e. Strictly convex.
NonlinearProblem perturbed_quadratic(int n) {
  auto f = [](Span x) {
    double acc = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      acc += static_cast<double>(i + 1) * x[i] * x[i];
      sum += x[i];
    }
    return acc + sum * sum / 100.0;
  };
  auto g = [](Span x, MutSpan grad) {
    double sum = 0.0;
    for (double v : x) sum += v;
    for (std::size_t i = 0; i < x.size(); ++i)
      grad[i] = 2.0 * static_cast<double>(i + 1) * x[i] + 2.0 * sum / 100.0;
  };
  NonlinearProblem p("perturbed_quadratic", n, f, g, Vec(static_cast<std::size_t>(n), 0.5));
  p.set_convex(true);
  return p;
}

// r_i = (3 - 2 x_i) x_i - x_{i-1} - 2 x_{i+1} + 1 (x_0 = x_{n+1} = 0),
// f = sum r_i^2, x0 = -e. Excluded from profile analysis (multiple
// stationary points).
NonlinearProblem broyden_tridiagonal(int n) {
  auto residuals = [](Span x, Vec& r) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
      double v = (3.0 - 2.0 * x[i]) * x[i] + 1.0;
      if (i > 0) v -= x[i - 1];
      if (i + 1 < n) v -= 2.0 * x[i + 1];
      r[i] = v;
    }
  };
  auto f = [residuals](Span x) {
    Vec r(x.size());
    residuals(x, r);
    double acc = 0.0;
    for (double v : r) acc += v * v;
    return acc;
  };
  auto g = [residuals](Span x, MutSpan grad) {
    const std::size_t n = x.size();
    Vec r(n);
    residuals(x, r);
    for (std::size_t j = 0; j < n; ++j) {
      double acc = r[j] * (3.0 - 4.0 * x[j]);
      if (j + 1 < n) acc -= r[j + 1];
      if (j > 0) acc -= 2.0 * r[j - 1];
      grad[j] = 2.0 * acc;
    }
  };
  NonlinearProblem p("broyden_tridiagonal", n, f, g, Vec(static_cast<std::size_t>(n), -1.0));
  p.set_nonconvex_excluded(true);
  return p;
}

// Pairs of the Freudenstein-Roth residuals:
// r1 = -13 + u + ((5 - v) v - 2) v, r2 = -29 + u + ((v + 1) v - 14) v,
// f = sum (r1^2 + r2^2), x0 pairs (0.5, -2). Excluded from profile analysis.
NonlinearProblem extended_freudenstein_roth(int n) {
  require_even("extended_freudenstein_roth", n);
  auto f = [](Span x) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      const double u = x[i], v = x[i + 1];
      const double r1 = -13.0 + u + ((5.0 - v) * v - 2.0) * v;
      const double r2 = -29.0 + u + ((v + 1.0) * v - 14.0) * v;
      acc += r1 * r1 + r2 * r2;
    }
    return acc;
  };
  auto g = [](Span x, MutSpan grad) {
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      const double u = x[i], v = x[i + 1];
      const double r1 = -13.0 + u + ((5.0 - v) * v - 2.0) * v;
      const double r2 = -29.0 + u + ((v + 1.0) * v - 14.0) * v;
      const double dr1 = 10.0 * v - 3.0 * v * v - 2.0;
      const double dr2 = 3.0 * v * v + 2.0 * v - 14.0;
      grad[i] = 2.0 * (r1 + r2);
      grad[i + 1] = 2.0 * (r1 * dr1 + r2 * dr2);
    }
  };
  NonlinearProblem p("extended_freudenstein_roth", n, f, g, alternating_x0(n, 0.5, -2.0));
  p.set_nonconvex_excluded(true);
  return p;
}

// r_i = (5 - 3 x_i - x_i^2) x_i - x_{i-1} - 3 x_{i+1} + 1 with the boundary
// neighbors dropped, f = sum r_i^2, x0 = -e. Excluded from profile analysis.
NonlinearProblem generalized_tridiagonal2(int n) {
  auto residuals = [](Span x, Vec& r) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
      double v = (5.0 - 3.0 * x[i] - x[i] * x[i]) * x[i] + 1.0;
      if (i > 0) v -= x[i - 1];
      if (i + 1 < n) v -= 3.0 * x[i + 1];
      r[i] = v;
    }
  };
  auto f = [residuals](Span x) {
    Vec r(x.size());
    residuals(x, r);
    double acc = 0.0;
    for (double v : r) acc += v * v;
    return acc;
  };
  auto g = [residuals](Span x, MutSpan grad) {
    const std::size_t n = x.size();
    Vec r(n);
    residuals(x, r);
    for (std::size_t j = 0; j < n; ++j) {
      double acc = r[j] * (5.0 - 6.0 * x[j] - 3.0 * x[j] * x[j]);
      if (j + 1 < n) acc -= r[j + 1];
      if (j > 0) acc -= 3.0 * r[j - 1];
      grad[j] = 2.0 * acc;
    }
  };
  NonlinearProblem p("generalized_tridiagonal2", n, f, g, Vec(static_cast<std::size_t>(n), -1.0));
  p.set_nonconvex_excluded(true);
  return p;
}

// f = 1 + sum x_i^2 / 4000 - prod cos(x_i / sqrt(i)), x0 = e. Excluded from
// profile analysis.
NonlinearProblem griewank(int n) {
  auto f = [](Span x) {
    double sum = 0.0, prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sum += x[i] * x[i];
      prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return 1.0 + sum / 4000.0 - prod;
  };
  auto g = [](Span x, MutSpan grad) {
    const std::size_t n = x.size();
    // Prefix/suffix products keep the per-coordinate cofactor stable even
    // when some cosine vanishes.
    Vec cosv(n), prefix(n + 1, 1.0), suffix(n + 1, 1.0);
    for (std::size_t i = 0; i < n; ++i)
      cosv[i] = std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * cosv[i];
    for (std::size_t i = n; i > 0; --i) suffix[i - 1] = suffix[i] * cosv[i - 1];
    for (std::size_t i = 0; i < n; ++i) {
      const double root = std::sqrt(static_cast<double>(i + 1));
      const double cofactor = prefix[i] * suffix[i + 1];
      grad[i] = x[i] / 2000.0 + cofactor * std::sin(x[i] / root) / root;
    }
  };
  NonlinearProblem p("griewank", n, f, g, Vec(static_cast<std::size_t>(n), 1.0));
  p.set_nonconvex_excluded(true);
  return p;
}

// r_i = n - sum_j cos x_j + i (1 - cos x_i) - sin x_i, f = sum r_i^2,
// x0 = (1/n) e. Excluded from profile analysis.
NonlinearProblem trigonometric(int n) {
  auto f = [](Span x) {
    const std::size_t n = x.size();
    double csum = 0.0;
    for (double v : x) csum += std::cos(v);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = static_cast<double>(n) - csum +
                       static_cast<double>(i + 1) * (1.0 - std::cos(x[i])) - std::sin(x[i]);
      acc += r * r;
    }
    return acc;
  };
  auto g = [](Span x, MutSpan grad) {
    const std::size_t n = x.size();
    double csum = 0.0;
    for (double v : x) csum += std::cos(v);
    Vec r(n);
    double rsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = static_cast<double>(n) - csum +
             static_cast<double>(i + 1) * (1.0 - std::cos(x[i])) - std::sin(x[i]);
      rsum += r[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double sj = std::sin(x[j]), cj = std::cos(x[j]);
      grad[j] = 2.0 * (rsum * sj + r[j] * (static_cast<double>(j + 1) * sj - cj));
    }
  };
  Vec x0(static_cast<std::size_t>(n), 1.0 / n);
  NonlinearProblem p("trigonometric", n, f, g, std::move(x0));
  p.set_nonconvex_excluded(true);
  return p;
}

}  // namespace

std::vector<std::string> collection_names() {
  return {"extended_rosenbrock",
          "generalized_rosenbrock",
          "extended_beale",
          "extended_himmelblau",
          "extended_white_holst",
          "diagonal1",
          "diagonal2",
          "diagonal3",
          "diagonal4",
          "strictly_convex1",
          "strictly_convex2",
          "extended_tridiagonal1",
          "perturbed_quadratic",
          "broyden_tridiagonal",
          "extended_freudenstein_roth",
          "generalized_tridiagonal2",
          "griewank",
          "trigonometric"};
}

NonlinearProblem collection_function(const std::string& name, int n) {
  if (name == "extended_rosenbrock") return extended_rosenbrock(n);
  if (name == "generalized_rosenbrock") return generalized_rosenbrock(n);
  if (name == "extended_beale") return extended_beale(n);
  if (name == "extended_himmelblau") return extended_himmelblau(n);
  if (name == "extended_white_holst") return extended_white_holst(n);
  if (name == "diagonal1") return diagonal1(n);
  if (name == "diagonal2") return diagonal2(n);
  if (name == "diagonal3") return diagonal3(n);
  if (name == "diagonal4") return diagonal4(n);
  if (name == "strictly_convex1") return strictly_convex1(n);
  if (name == "strictly_convex2") return strictly_convex2(n);
  if (name == "extended_tridiagonal1") return extended_tridiagonal1(n);
  if (name == "perturbed_quadratic") return perturbed_quadratic(n);
  if (name == "broyden_tridiagonal") return broyden_tridiagonal(n);
  if (name == "extended_freudenstein_roth") return extended_freudenstein_roth(n);
  if (name == "generalized_tridiagonal2") return generalized_tridiagonal2(n);
  if (name == "griewank") return griewank(n);
  if (name == "trigonometric") return trigonometric(n);
  throw std::invalid_argument("unknown collection function '" + name + "'");
}

std::vector<NonlinearProblem> nonlinear_collection(int n) {
  std::vector<NonlinearProblem> out;
  for (const auto& name : collection_names()) out.push_back(collection_function(name, n));
  return out;
}

}  // namespace tbbgrad
