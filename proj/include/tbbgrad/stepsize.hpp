#pragma once

#include <deque>
#include <span>
#include <string>
#include <string_view>

#include "tbbgrad/spd_operator.hpp"
#include "tbbgrad/types.hpp"

// Stepsize engine for gradient methods built on the harmonic Rayleigh
// quotient with a spectral target tau. With s the last step and y the
// gradient difference, the stepsize is
//
//   beta(tau) = s'(y - tau s) / y'(y - tau s)
//
// which interpolates between the two classical spectral steps: tau = 0 gives
// beta_bb2 = s'y/y'y and tau = +/-inf gives beta_bb1 = s's/s'y. Finite
// targets trade off between them along a strictly monotone curve with a pole
// at tau = alpha_bb2 = y'y/s'y.

namespace tbbgrad {

enum class TargetKind { Finite, PlusInf, MinusInf, NA };

// Extended-real spectral target. Infinite targets are tagged and dispatched
// to the exact beta_bb1 formula, never approximated by a large finite tau.
struct Target {
  TargetKind kind = TargetKind::NA;
  double value = 0.0;

  static Target finite(double v) { return {TargetKind::Finite, v}; }
  static Target plus_inf() { return {TargetKind::PlusInf, 0.0}; }
  static Target minus_inf() { return {TargetKind::MinusInf, 0.0}; }
  static Target na() { return {TargetKind::NA, 0.0}; }

  bool is_finite() const { return kind == TargetKind::Finite; }
  bool is_infinite() const { return kind == TargetKind::PlusInf || kind == TargetKind::MinusInf; }
  // "+inf", "-inf", "na", or the decimal value.
  std::string str() const;
};

enum class StrategyKind { Bb1, Bb2, Abb, AbbMin, AbbBon, Ibb2, Iter, Cot, Con };

// Parsed strategy token. Canonical grammar: name(:param)* with
//   bb1 | bb2 | abb[:eta] | abbmin[:eta[:m]] | abbbon[:eta0[:m]] |
//   ibb2[:rho] | iter | cot[:q[:r]] | con[:zeta]
struct TargetStrategy {
  StrategyKind kind = StrategyKind::Bb1;
  double eta = 0.8;  // abb/abbmin threshold, abbbon initial threshold
  int m = 4;         // abbmin/abbbon history length parameter
  double rho = 2.01; // ibb2 multiple of alpha_bb2
  double q = 1.0;    // cot cosine exponent
  double r = 1.0;    // cot sine exponent
  double zeta = 0.5; // con convex-combination weight on beta_bb1

  static TargetStrategy parse(std::string_view token);
  std::string str() const;
  bool is_abb_family() const {
    return kind == StrategyKind::Abb || kind == StrategyKind::AbbMin ||
           kind == StrategyKind::AbbBon;
  }
};

// The thirteen strategies used by the experiment tables, canonical spelling.
std::vector<TargetStrategy> table_strategies();

struct BbQuotients {
  double beta_bb1 = 0.0;
  double beta_bb2 = 0.0;
  double alpha_bb1 = 0.0;
  double alpha_bb2 = 0.0;
  double cos2 = 0.0;  // squared cosine of the angle between s and y
};

// Per-iteration inputs plus the engine state that persists across
// iterations (BB2 history ring and the adaptive abbbon threshold).
struct StepContext {
  Vec s;
  Vec y;
  double sts = 0.0;
  double sty = 0.0;
  double yty = 0.0;
  long k = 0;          // index of the step being produced (>= 1 in a run)
  double g_norm = 0.0; // norm of the current gradient
  double beta_prev = 0.0;

  std::deque<double> bb2_history;  // most recent last; capped at m+1 entries
  double eta_state = -1.0;         // abbbon adaptive threshold; < 0 = uninitialized

  // Build/refresh the context from a step pair; cached inner products are
  // recomputed, the persistent state is preserved.
  void update(const Vec& s_in, const Vec& y_in, long k_in, double g_norm_in);
};

enum class StepSource {
  Initial,          // iteration-0 row: beta0, no target
  Tbb,              // target-form step
  AbbPickBb1,       // adaptive family chose the BB1 branch
  AbbPickBb2,       // adaptive family chose the BB2 branch
  Replacement,      // negative-curvature replacement stepsize
  SafeguardClamped, // clamped to [beta_min, beta_max]
  PoleFallback,     // requested target hit the pole; BB2 used instead
  Terminal          // final-iterate row: no step taken
};

std::string source_str(StepSource s);

struct StepDecision {
  double beta = 0.0;
  Target tau = Target::na();
  StepSource source = StepSource::Tbb;
};

// Quotients from the cached products. Throws std::invalid_argument when the
// secant pair is degenerate (s'y == 0 or y'y == 0); cos2 is clamped to [0,1].
BbQuotients bb_quotients(const StepContext& ctx);

// beta(tau) for a tagged target. Infinite targets dispatch to beta_bb1;
// throws PoleError when |y'y - tau s'y| <= 1e-14 max(|y'y|, |tau s'y|).
double tbb_beta(const StepContext& ctx, const Target& tau);

// Target selection for the non-adaptive strategies; NA for the abb family.
Target select_target(const TargetStrategy& st, const StepContext& ctx);

// Adaptive-family step (abb, abbmin, abbbon). Pushes the current beta_bb2
// into ctx.bb2_history, updates the abbbon threshold, and reports which
// branch fired. Precondition: non-degenerate secant pair.
StepDecision abb_family_beta(const TargetStrategy& st, StepContext& ctx);

// One engine step: quotients, target or branch selection, pole fallback.
StepDecision compute_step(const TargetStrategy& st, StepContext& ctx);

enum class ReplacementRule { Raydan, BetaMax, InvGnorm, Recycle };

// Stepsize used when the secant pair has s'y <= 0 and the quotients are
// meaningless. Raydan: max(min(1/||g||, 1e5), 1).
double replacement_step(ReplacementRule rule, double g_norm, double beta_prev, double beta_max);

// Clamp to [beta_min, beta_max]; sets *clamped when the bounds were active.
double safeguard(double beta, double beta_min, double beta_max, bool* clamped = nullptr);

// || s - (alpha - tau)^{-1} (y - tau s) ||_2, the shifted secant residual
// whose minimizer over alpha is 1/tbb_beta(tau). Test instrumentation.
// Throws std::invalid_argument when alpha == tau.
double secant_residual(std::span<const double> s, std::span<const double> y, double alpha,
                       double tau);

// argmin_alpha || y - alpha s ||_W = y'Ws / s'Ws for SPD W. Throws
// std::invalid_argument when s'Ws <= 0 (weight not positive definite on s).
double weighted_secant_argmin(const SpdOperator& w, std::span<const double> s,
                              std::span<const double> y);

}  // namespace tbbgrad
