#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tbbgrad/problems.hpp"

namespace tbbgrad {

enum class QpKind { Geometric, TwoCluster, CovarianceLike };

// Synthetic diagonal SPD quadratic. All generators emit eigenvalues sorted
// ascending with the extremes pinned to exactly [lambda1, lambda_n], so
// kappa = lambda_n/lambda1 holds by construction; b = A e (minimizer e) and
// x0 = x0_value * e.
struct QpGeneratorSpec {
  QpKind kind = QpKind::Geometric;
  int n = 100;
  double lambda1 = 1.0;
  double lambda_n = 1e4;
  unsigned long seed = 1;
  // two_cluster: fraction of eigenvalues in the low cluster, cluster centers,
  // and absolute jitter (low cluster jitters up, high cluster jitters down).
  double frac1 = 0.5;
  double center1 = 0.0;  // defaults to lambda1 when 0
  double center2 = 0.0;  // defaults to lambda_n when 0
  double jitter = 0.0;
  // covariance_like: Marchenko-Pastur shape ratio in (0,1).
  double mp_ratio = 0.5;
  double x0_value = -10.0;
};

QuadraticProblem generate_qp(const QpGeneratorSpec& spec);

// Diagonal quadratic with log-uniform random interior eigenvalues, extremes
// pinned to [1, kappa]. Convenience for seeded solver sweeps.
QuadraticProblem random_diag_qp(int n, double kappa, unsigned long seed);

// Smooth test collection (dimension n, even where the formula pairs
// coordinates). Standard starting points from the source collections; runs
// typically also use 5*x0 and 10*x0. Functions the experiments exclude from
// profile aggregation carry nonconvex_excluded(); the strictly convex subset
// carries convex().
std::vector<NonlinearProblem> nonlinear_collection(int n = 100);
NonlinearProblem collection_function(const std::string& name, int n = 100);
std::vector<std::string> collection_names();

// Nonlinear view of a quadratic, sharing the operator; evaluations count on
// the adapter's own counters.
NonlinearProblem as_nonlinear(const QuadraticProblem& q);

}  // namespace tbbgrad
