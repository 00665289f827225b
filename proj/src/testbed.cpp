#include "tbbgrad/testbed.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "tbbgrad/kernels.hpp"
#include "tbbgrad/spd_operator.hpp"

namespace tbbgrad {

namespace {

void validate_common(const QpGeneratorSpec& s) {
  if (s.n < 1) throw std::invalid_argument("qp generator: n must be at least 1");
  if (!(s.lambda1 > 0.0)) throw std::invalid_argument("qp generator: lambda1 must be positive");
  if (!(s.lambda_n >= s.lambda1))
    throw std::invalid_argument("qp generator: lambda_n must be at least lambda1");
}

Vec geometric_eigenvalues(const QpGeneratorSpec& s) {
  Vec lam(static_cast<std::size_t>(s.n));
  if (s.n == 1) {
    lam[0] = s.lambda1;
    return lam;
  }
  const double ratio = s.lambda_n / s.lambda1;
  for (int i = 0; i < s.n; ++i)
    lam[i] = s.lambda1 * std::pow(ratio, static_cast<double>(i) / (s.n - 1));
  lam.front() = s.lambda1;
  lam.back() = s.lambda_n;
  return lam;
}

Vec two_cluster_eigenvalues(const QpGeneratorSpec& s) {
  if (!(s.frac1 >= 0.0 && s.frac1 <= 1.0))
    throw std::invalid_argument("qp generator: frac1 must be in [0,1]");
  const double c1 = s.center1 > 0.0 ? s.center1 : s.lambda1;
  const double c2 = s.center2 > 0.0 ? s.center2 : s.lambda_n;
  if (c1 < s.lambda1 || c2 > s.lambda_n || c1 > c2)
    throw std::invalid_argument("qp generator: cluster centers must satisfy "
                                "lambda1 <= center1 <= center2 <= lambda_n");
  if (s.jitter < 0.0) throw std::invalid_argument("qp generator: jitter must be nonnegative");
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n1 = static_cast<int>(std::lround(s.frac1 * s.n));
  Vec lam;
  lam.reserve(static_cast<std::size_t>(s.n));
  for (int i = 0; i < n1; ++i) lam.push_back(c1 + s.jitter * unit(rng));
  for (int i = n1; i < s.n; ++i) lam.push_back(c2 - s.jitter * unit(rng));
  for (auto& v : lam) v = std::clamp(v, s.lambda1, s.lambda_n);
  std::sort(lam.begin(), lam.end());
  lam.front() = s.lambda1;
  lam.back() = s.lambda_n;
  return lam;
}

// Marchenko-Pastur density on [(1-sqrt(q))^2, (1+sqrt(q))^2], sampled by
// inverse CDF from a tabulated cumulative, then rescaled affinely onto
// [lambda1, lambda_n]. Seeded uniforms place the interior eigenvalues; the
// extremes are pinned per the kappa contract.
Vec covariance_eigenvalues(const QpGeneratorSpec& s) {
  if (!(s.mp_ratio > 0.0 && s.mp_ratio < 1.0))
    throw std::invalid_argument("qp generator: mp_ratio must be in (0,1)");
  const double q = s.mp_ratio;
  const double a = (1.0 - std::sqrt(q)) * (1.0 - std::sqrt(q));
  const double b = (1.0 + std::sqrt(q)) * (1.0 + std::sqrt(q));
  constexpr int kTable = 4096;
  Vec grid(kTable + 1), cdf(kTable + 1, 0.0);
  auto density = [&](double x) {
    const double t = (b - x) * (x - a);
    return t > 0.0 ? std::sqrt(t) / (2.0 * 3.14159265358979323846 * q * x) : 0.0;
  };
  for (int i = 0; i <= kTable; ++i) grid[i] = a + (b - a) * i / kTable;
  for (int i = 1; i <= kTable; ++i) {
    const double h = grid[i] - grid[i - 1];
    cdf[i] = cdf[i - 1] + 0.5 * h * (density(grid[i]) + density(grid[i - 1]));
  }
  for (auto& c : cdf) c /= cdf[kTable];
  auto inverse = [&](double u) {
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.begin()) return grid.front();
    if (it == cdf.end()) return grid.back();
    const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
    const double w = (u - cdf[i - 1]) / std::max(cdf[i] - cdf[i - 1], 1e-300);
    return grid[i - 1] + w * (grid[i] - grid[i - 1]);
  };

  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec lam;
  lam.reserve(static_cast<std::size_t>(s.n));
  lam.push_back(s.lambda1);
  for (int i = 0; i < s.n - 2; ++i) {
    const double x = inverse(unit(rng));
    lam.push_back(s.lambda1 + (x - a) / (b - a) * (s.lambda_n - s.lambda1));
  }
  if (s.n > 1) lam.push_back(s.lambda_n);
  for (auto& v : lam) v = std::clamp(v, s.lambda1, s.lambda_n);
  std::sort(lam.begin(), lam.end());
  lam.front() = s.lambda1;
  lam.back() = s.lambda_n;
  return lam;
}

std::string kind_tag(QpKind k) {
  switch (k) {
    case QpKind::Geometric:
      return "geometric";
    case QpKind::TwoCluster:
      return "two_cluster";
    case QpKind::CovarianceLike:
      return "covariance_like";
  }
  return "?";
}

}  // namespace

QuadraticProblem generate_qp(const QpGeneratorSpec& spec) {
  validate_common(spec);
  Vec lam;
  switch (spec.kind) {
    case QpKind::Geometric:
      lam = geometric_eigenvalues(spec);
      break;
    case QpKind::TwoCluster:
      lam = two_cluster_eigenvalues(spec);
      break;
    case QpKind::CovarianceLike:
      lam = covariance_eigenvalues(spec);
      break;
  }
  const double lo = lam.front(), hi = lam.back();
  SpdOperator a = SpdOperator::diagonal(std::move(lam));
  const auto n = static_cast<std::size_t>(spec.n);
  Vec ones(n, 1.0);
  Vec b = a.apply(ones);
  Vec x0(n, spec.x0_value);
  std::string name = kind_tag(spec.kind) + "_n" + std::to_string(spec.n) + "_k" +
                     fmt_num(spec.lambda_n / spec.lambda1) + "_s" + std::to_string(spec.seed);
  QuadraticProblem p(std::move(name), std::move(a), std::move(b), std::move(x0), ones);
  p.set_extreme_eigenvalues(lo, hi);
  return p;
}

QuadraticProblem random_diag_qp(int n, double kappa, unsigned long seed) {
  if (n < 2) throw std::invalid_argument("random_diag_qp: n must be at least 2");
  if (!(kappa >= 1.0)) throw std::invalid_argument("random_diag_qp: kappa must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec lam(static_cast<std::size_t>(n));
  lam.front() = 1.0;
  lam.back() = kappa;
  for (int i = 1; i + 1 < n; ++i) lam[i] = std::exp(unit(rng) * std::log(kappa));
  std::sort(lam.begin(), lam.end());
  lam.front() = 1.0;
  lam.back() = kappa;
  const double lo = lam.front(), hi = lam.back();
  SpdOperator a = SpdOperator::diagonal(std::move(lam));
  const auto sz = static_cast<std::size_t>(n);
  Vec ones(sz, 1.0);
  Vec b = a.apply(ones);
  Vec x0(sz, -10.0);
  std::string name =
      "rand_diag_n" + std::to_string(n) + "_k" + fmt_num(kappa) + "_s" + std::to_string(seed);
  QuadraticProblem p(std::move(name), std::move(a), std::move(b), std::move(x0), ones);
  p.set_extreme_eigenvalues(lo, hi);
  return p;
}

NonlinearProblem as_nonlinear(const QuadraticProblem& q) {
  auto shared = std::make_shared<const QuadraticProblem>(q);
  auto f = [shared](std::span<const double> x) {
    Vec ax(x.size());
    shared->op().apply(x, ax);
    return 0.5 * kernels::dot(x, ax) - kernels::dot(shared->b(), x);
  };
  auto g = [shared](std::span<const double> x, std::span<double> grad) {
    shared->op().apply(x, grad);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] -= shared->b()[i];
  };
  return NonlinearProblem(q.name(), q.dim(), std::move(f), std::move(g), q.x0());
}

}  // namespace tbbgrad
