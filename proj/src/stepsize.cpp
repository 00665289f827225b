#include "tbbgrad/stepsize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tbbgrad/errors.hpp"
#include "tbbgrad/kernels.hpp"

namespace tbbgrad {

std::string Target::str() const {
  switch (kind) {
    case TargetKind::PlusInf:
      return "+inf";
    case TargetKind::MinusInf:
      return "-inf";
    case TargetKind::NA:
      return "na";
    case TargetKind::Finite:
      break;
  }
  return fmt_num(value);
}

namespace {

double parse_param(std::string_view token, std::string_view field, const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != text.size())
    throw std::invalid_argument("strategy '" + std::string(token) + "': bad " +
                                std::string(field) + " value '" + text + "'");
  return v;
}

int parse_int_param(std::string_view token, std::string_view field, const std::string& text) {
  const double v = parse_param(token, field, text);
  if (v != std::floor(v) || v < 1 || v > 1e6)
    throw std::invalid_argument("strategy '" + std::string(token) + "': " + std::string(field) +
                                " must be a positive integer, got '" + text + "'");
  return static_cast<int>(v);
}

}  // namespace

TargetStrategy TargetStrategy::parse(std::string_view token) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= token.size()) {
    const std::size_t colon = token.find(':', start);
    if (colon == std::string_view::npos) {
      parts.emplace_back(token.substr(start));
      break;
    }
    parts.emplace_back(token.substr(start, colon - start));
    start = colon + 1;
  }
  std::string name = parts[0];
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const std::size_t np = parts.size() - 1;
  auto require_params = [&](std::size_t max) {
    if (np > max)
      throw std::invalid_argument("strategy '" + std::string(token) + "': too many parameters");
  };

  TargetStrategy st;
  if (name == "bb1") {
    require_params(0);
    st.kind = StrategyKind::Bb1;
  } else if (name == "bb2") {
    require_params(0);
    st.kind = StrategyKind::Bb2;
  } else if (name == "iter") {
    require_params(0);
    st.kind = StrategyKind::Iter;
  } else if (name == "abb" || name == "abbmin" || name == "abbbon") {
    require_params(name == "abb" ? 1 : 2);
    st.kind = name == "abb"      ? StrategyKind::Abb
              : name == "abbmin" ? StrategyKind::AbbMin
                                 : StrategyKind::AbbBon;
    if (st.kind == StrategyKind::AbbBon) st.eta = 0.5;
    if (np >= 1) st.eta = parse_param(token, "eta", parts[1]);
    if (np >= 2) st.m = parse_int_param(token, "m", parts[2]);
    if (!(st.eta > 0.0 && st.eta < 1.0))
      throw std::invalid_argument("strategy '" + std::string(token) + "': eta must be in (0,1)");
  } else if (name == "ibb2") {
    require_params(1);
    st.kind = StrategyKind::Ibb2;
    if (np >= 1) st.rho = parse_param(token, "rho", parts[1]);
    if (!(st.rho > 1.0))
      throw std::invalid_argument("strategy '" + std::string(token) + "': rho must exceed 1");
  } else if (name == "cot") {
    require_params(2);
    st.kind = StrategyKind::Cot;
    if (np >= 1) st.q = parse_param(token, "q", parts[1]);
    if (np >= 2) st.r = parse_param(token, "r", parts[2]);
    if (!(st.q > 0.0) || !(st.r > 0.0))
      throw std::invalid_argument("strategy '" + std::string(token) +
                                  "': exponents must be positive");
  } else if (name == "con") {
    require_params(1);
    st.kind = StrategyKind::Con;
    if (np >= 1) st.zeta = parse_param(token, "zeta", parts[1]);
    if (!(st.zeta >= 0.0 && st.zeta <= 1.0))
      throw std::invalid_argument("strategy '" + std::string(token) +
                                  "': zeta must be in [0,1]");
  } else {
    throw std::invalid_argument("unknown strategy '" + std::string(token) + "'");
  }
  return st;
}

std::string TargetStrategy::str() const {
  switch (kind) {
    case StrategyKind::Bb1:
      return "bb1";
    case StrategyKind::Bb2:
      return "bb2";
    case StrategyKind::Iter:
      return "iter";
    case StrategyKind::Abb:
      return "abb:" + fmt_num(eta);
    case StrategyKind::AbbMin:
      return "abbmin:" + fmt_num(eta) + ":" + std::to_string(m);
    case StrategyKind::AbbBon:
      return "abbbon:" + fmt_num(eta) + ":" + std::to_string(m);
    case StrategyKind::Ibb2:
      return "ibb2:" + fmt_num(rho);
    case StrategyKind::Cot:
      return "cot:" + fmt_num(q) + ":" + fmt_num(r);
    case StrategyKind::Con:
      return "con:" + fmt_num(zeta);
  }
  return "?";
}

std::vector<TargetStrategy> table_strategies() {
  const char* names[] = {"bb1",      "bb2",       "abb:0.8", "abbmin:0.8:4", "abbbon:0.5:4",
                         "ibb2:2.01", "ibb2:100", "iter",    "cot:1:1",      "cot:0.5:1",
                         "cot:1:0.5", "cot:2:1",  "cot:1:2"};
  std::vector<TargetStrategy> out;
  for (const char* n : names) out.push_back(TargetStrategy::parse(n));
  return out;
}

std::string source_str(StepSource s) {
  switch (s) {
    case StepSource::Initial:
      return "initial";
    case StepSource::Tbb:
      return "tbb";
    case StepSource::AbbPickBb1:
      return "abb_pick_bb1";
    case StepSource::AbbPickBb2:
      return "abb_pick_bb2";
    case StepSource::Replacement:
      return "replacement";
    case StepSource::SafeguardClamped:
      return "safeguard_clamped";
    case StepSource::PoleFallback:
      return "pole_fallback";
    case StepSource::Terminal:
      return "terminal";
  }
  return "?";
}

void StepContext::update(const Vec& s_in, const Vec& y_in, long k_in, double g_norm_in) {
  s = s_in;
  y = y_in;
  sts = kernels::dot(s, s);
  sty = kernels::dot(s, y);
  yty = kernels::dot(y, y);
  k = k_in;
  g_norm = g_norm_in;
}

BbQuotients bb_quotients(const StepContext& ctx) {
  if (ctx.sts == 0.0 || ctx.yty == 0.0 || ctx.sty == 0.0)
    throw std::invalid_argument("degenerate secant pair: s's=" + fmt_num(ctx.sts) +
                                " s'y=" + fmt_num(ctx.sty) + " y'y=" + fmt_num(ctx.yty));
  BbQuotients q;
  q.beta_bb1 = ctx.sts / ctx.sty;
  q.beta_bb2 = ctx.sty / ctx.yty;
  q.alpha_bb1 = ctx.sty / ctx.sts;
  q.alpha_bb2 = ctx.yty / ctx.sty;
  q.cos2 = std::clamp(ctx.sty * ctx.sty / (ctx.sts * ctx.yty), 0.0, 1.0);
  return q;
}

double tbb_beta(const StepContext& ctx, const Target& tau) {
  if (tau.kind == TargetKind::NA)
    throw std::invalid_argument("tbb_beta: target required, got na");
  if (tau.is_infinite()) {
    if (ctx.sty == 0.0) throw std::invalid_argument("tbb_beta: s'y == 0, beta_bb1 undefined");
    return ctx.sts / ctx.sty;
  }
  const double t = tau.value;
  const double num = ctx.sty - t * ctx.sts;
  const double den = ctx.yty - t * ctx.sty;
  if (std::abs(den) <= 1e-14 * std::max(std::abs(ctx.yty), std::abs(t * ctx.sty)))
    throw PoleError("tbb_beta: target " + fmt_num(t) + " hits the pole at alpha_bb2");
  return num / den;
}

namespace {

Target select_target_impl(const TargetStrategy& st, const StepContext& ctx,
                          const BbQuotients& q) {
  switch (st.kind) {
    case StrategyKind::Bb1:
      return Target::minus_inf();
    case StrategyKind::Bb2:
      return Target::finite(0.0);
    case StrategyKind::Ibb2:
      return Target::finite(st.rho * q.alpha_bb2);
    case StrategyKind::Iter:
      return ctx.k <= 1 ? Target::finite(0.0)
                        : Target::finite(static_cast<double>(ctx.k) * q.alpha_bb2);
    case StrategyKind::Cot: {
      const double cos = std::sqrt(q.cos2);
      const double sin2 = 1.0 - q.cos2;
      if (sin2 <= 0.0) return Target::minus_inf();
      const double tau = -std::pow(cos, st.q) / std::pow(std::sqrt(sin2), st.r);
      // sin^r can underflow to zero for near-parallel pairs; that limit is
      // the BB1 target.
      if (!std::isfinite(tau)) return Target::minus_inf();
      return Target::finite(tau);
    }
    case StrategyKind::Con: {
      if (st.zeta == 1.0) return Target::minus_inf();
      return Target::finite(-st.zeta / (1.0 - st.zeta) * q.alpha_bb2);
    }
    case StrategyKind::Abb:
    case StrategyKind::AbbMin:
    case StrategyKind::AbbBon:
      return Target::na();
  }
  return Target::na();
}

}  // namespace

Target select_target(const TargetStrategy& st, const StepContext& ctx) {
  if (st.is_abb_family()) return Target::na();
  return select_target_impl(st, ctx, bb_quotients(ctx));
}

StepDecision abb_family_beta(const TargetStrategy& st, StepContext& ctx) {
  const BbQuotients q = bb_quotients(ctx);
  ctx.bb2_history.push_back(q.beta_bb2);
  while (ctx.bb2_history.size() > static_cast<std::size_t>(st.m) + 1) ctx.bb2_history.pop_front();

  double threshold = st.eta;
  if (st.kind == StrategyKind::AbbBon) {
    if (ctx.eta_state < 0.0) ctx.eta_state = st.eta;
    threshold = ctx.eta_state;
  }
  const bool pick_bb2 = q.beta_bb2 < threshold * q.beta_bb1;
  if (st.kind == StrategyKind::AbbBon) ctx.eta_state = (pick_bb2 ? 0.9 : 1.1) * threshold;

  double beta = q.beta_bb1;
  if (pick_bb2) {
    beta = st.kind == StrategyKind::Abb
               ? q.beta_bb2
               : *std::min_element(ctx.bb2_history.begin(), ctx.bb2_history.end());
  }
  return {beta, Target::na(), pick_bb2 ? StepSource::AbbPickBb2 : StepSource::AbbPickBb1};
}

StepDecision compute_step(const TargetStrategy& st, StepContext& ctx) {
  if (st.is_abb_family()) return abb_family_beta(st, ctx);
  const BbQuotients q = bb_quotients(ctx);
  const Target tau = select_target_impl(st, ctx, q);
  if (tau.is_finite() &&
      std::abs(tau.value - q.alpha_bb2) <= 1e-8 * std::abs(q.alpha_bb2))
    return {q.beta_bb2, tau, StepSource::PoleFallback};
  try {
    return {tbb_beta(ctx, tau), tau, StepSource::Tbb};
  } catch (const PoleError&) {
    return {q.beta_bb2, tau, StepSource::PoleFallback};
  }
}

double replacement_step(ReplacementRule rule, double g_norm, double beta_prev, double beta_max) {
  switch (rule) {
    case ReplacementRule::Raydan:
      return std::max(std::min(1.0 / g_norm, 1e5), 1.0);
    case ReplacementRule::BetaMax:
      return beta_max;
    case ReplacementRule::InvGnorm:
      return g_norm > 0.0 ? 1.0 / g_norm : beta_max;
    case ReplacementRule::Recycle:
      return beta_prev > 0.0 ? beta_prev : 1.0;
  }
  return 1.0;
}

double safeguard(double beta, double beta_min, double beta_max, bool* clamped) {
  bool hit = false;
  double out = beta;
  if (out < beta_min) {
    out = beta_min;
    hit = true;
  } else if (out > beta_max) {
    out = beta_max;
    hit = true;
  }
  if (clamped) *clamped = hit;
  return out;
}

double secant_residual(std::span<const double> s, std::span<const double> y, double alpha,
                       double tau) {
  if (alpha == tau) throw std::invalid_argument("secant_residual: alpha equals tau");
  if (s.size() != y.size()) throw std::invalid_argument("secant_residual: size mismatch");
  const double inv = 1.0 / (alpha - tau);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = s[i] - inv * (y[i] - tau * s[i]);
    acc += r * r;
  }
  return std::sqrt(acc);
}

double weighted_secant_argmin(const SpdOperator& w, std::span<const double> s,
                              std::span<const double> y) {
  if (s.size() != y.size() || s.size() != static_cast<std::size_t>(w.dim()))
    throw std::invalid_argument("weighted_secant_argmin: size mismatch");
  Vec ws(s.size());
  w.apply(s, ws);
  const double sws = kernels::dot(s, ws);
  if (!(sws > 0.0))
    throw std::invalid_argument("weighted_secant_argmin: weight is not positive definite on s");
  return kernels::dot(y, ws) / sws;
}

}  // namespace tbbgrad
