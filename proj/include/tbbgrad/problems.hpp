#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "tbbgrad/spd_operator.hpp"
#include "tbbgrad/types.hpp"

namespace tbbgrad {

// Evaluation counts. Each objective call increments n_f by exactly one and
// each gradient call increments n_g by exactly one, regardless of caching.
struct EvalCounter {
  long n_f = 0;
  long n_g = 0;
  void reset() { n_f = n_g = 0; }
};

// min 0.5 x'Ax - b'x with A symmetric positive definite. Copies share the
// operator storage and get independent counters.
class QuadraticProblem {
 public:
  QuadraticProblem(std::string name, SpdOperator a, Vec b, Vec x0,
                   std::optional<Vec> x_star = std::nullopt);

  const std::string& name() const { return name_; }
  int dim() const { return a_.dim(); }
  const SpdOperator& op() const { return a_; }
  const Vec& b() const { return b_; }
  const Vec& x0() const { return x0_; }
  const std::optional<Vec>& x_star() const { return x_star_; }

  // Extreme eigenvalues when known exactly (diagonal generators record them).
  std::optional<std::pair<double, double>> extreme_eigenvalues() const { return eig_; }
  void set_extreme_eigenvalues(double lo, double hi) { eig_ = {lo, hi}; }

  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> g) const;
  // f and g = Ax - b with a single operator apply; counts one objective and
  // one gradient evaluation.
  double value_and_gradient(std::span<const double> x, std::span<double> g) const;

  EvalCounter& counters() const { return counters_; }

  // Same quadratic scaled by c > 0: minimizer unchanged, f and g scale by c.
  QuadraticProblem scaled(double c) const;

 private:
  std::string name_;
  SpdOperator a_;
  Vec b_;
  Vec x0_;
  std::optional<Vec> x_star_;
  std::optional<std::pair<double, double>> eig_;
  mutable EvalCounter counters_;
};

double quadratic_value_and_gradient(const QuadraticProblem& p, std::span<const double> x,
                                    std::span<double> g);

// Smooth unconstrained objective with hand-coded gradient. Copies share the
// (stateless) callables and get independent counters.
class NonlinearProblem {
 public:
  using ValueFn = std::function<double(std::span<const double>)>;
  using GradFn = std::function<void(std::span<const double>, std::span<double>)>;

  NonlinearProblem(std::string name, int n, ValueFn f, GradFn g, Vec x0);

  const std::string& name() const { return name_; }
  int dim() const { return n_; }
  const Vec& x0() const { return x0_; }

  double value(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> g) const;

  EvalCounter& counters() const { return counters_; }

  bool scale_by_g0() const { return scale_by_g0_; }
  NonlinearProblem& set_scale_by_g0(bool v) {
    scale_by_g0_ = v;
    return *this;
  }
  // Collection functions the experiments exclude from profile analysis
  // because different runs reach different stationary points.
  bool nonconvex_excluded() const { return nonconvex_excluded_; }
  NonlinearProblem& set_nonconvex_excluded(bool v) {
    nonconvex_excluded_ = v;
    return *this;
  }
  bool convex() const { return convex_; }
  NonlinearProblem& set_convex(bool v) {
    convex_ = v;
    return *this;
  }

  // Copy with x0 replaced by mult * x0.
  NonlinearProblem with_x0_multiplier(double mult) const;

  // Copy whose objective and gradient are multiplied by c > 0. Counter
  // values carry over so a run's totals stay in one place.
  NonlinearProblem scaled(double c) const;

 private:
  std::string name_;
  int n_;
  ValueFn f_;
  GradFn g_;
  Vec x0_;
  bool scale_by_g0_ = false;
  bool nonconvex_excluded_ = false;
  bool convex_ = false;
  mutable EvalCounter counters_;
};

}  // namespace tbbgrad
