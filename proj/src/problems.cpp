#include "tbbgrad/problems.hpp"

#include <stdexcept>

#include "tbbgrad/kernels.hpp"

namespace tbbgrad {

QuadraticProblem::QuadraticProblem(std::string name, SpdOperator a, Vec b, Vec x0,
                                   std::optional<Vec> x_star)
    : name_(std::move(name)),
      a_(std::move(a)),
      b_(std::move(b)),
      x0_(std::move(x0)),
      x_star_(std::move(x_star)) {
  const auto n = static_cast<std::size_t>(a_.dim());
  if (b_.size() != n || x0_.size() != n || (x_star_ && x_star_->size() != n))
    throw std::invalid_argument("quadratic problem '" + name_ + "': dimension mismatch");
}

double QuadraticProblem::value(std::span<const double> x) const {
  Vec ax(x.size());
  a_.apply(x, ax);
  ++counters_.n_f;
  return 0.5 * kernels::dot(x, ax) - kernels::dot(b_, x);
}

void QuadraticProblem::gradient(std::span<const double> x, std::span<double> g) const {
  a_.apply(x, g);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= b_[i];
  ++counters_.n_g;
}

double QuadraticProblem::value_and_gradient(std::span<const double> x,
                                            std::span<double> g) const {
  a_.apply(x, g);
  // f = 0.5 x'(Ax) - b'x computed from the same apply as the gradient.
  const double f = 0.5 * kernels::dot(x, g) - kernels::dot(b_, x);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= b_[i];
  ++counters_.n_f;
  ++counters_.n_g;
  return f;
}

QuadraticProblem QuadraticProblem::scaled(double c) const {
  Vec bs = b_;
  for (auto& v : bs) v *= c;
  QuadraticProblem out(name_, a_.scaled(c), std::move(bs), x0_, x_star_);
  out.eig_ = eig_ ? std::optional{std::pair{eig_->first * c, eig_->second * c}} : eig_;
  return out;
}

double quadratic_value_and_gradient(const QuadraticProblem& p, std::span<const double> x,
                                    std::span<double> g) {
  return p.value_and_gradient(x, g);
}

NonlinearProblem::NonlinearProblem(std::string name, int n, ValueFn f, GradFn g, Vec x0)
    : name_(std::move(name)), n_(n), f_(std::move(f)), g_(std::move(g)), x0_(std::move(x0)) {
  if (n_ <= 0 || x0_.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("nonlinear problem '" + name_ + "': dimension mismatch");
}

double NonlinearProblem::value(std::span<const double> x) const {
  ++counters_.n_f;
  return f_(x);
}

void NonlinearProblem::gradient(std::span<const double> x, std::span<double> g) const {
  ++counters_.n_g;
  g_(x, g);
}

NonlinearProblem NonlinearProblem::with_x0_multiplier(double mult) const {
  NonlinearProblem out = *this;
  for (auto& v : out.x0_) v *= mult;
  out.counters_.reset();
  return out;
}

NonlinearProblem NonlinearProblem::scaled(double c) const {
  if (!(c > 0.0)) throw std::invalid_argument("scaled: factor must be strictly positive");
  NonlinearProblem out = *this;
  out.f_ = [f = f_, c](std::span<const double> x) { return c * f(x); };
  out.g_ = [g = g_, c](std::span<const double> x, std::span<double> grad) {
    g(x, grad);
    for (auto& v : grad) v *= c;
  };
  return out;
}

}  // namespace tbbgrad
