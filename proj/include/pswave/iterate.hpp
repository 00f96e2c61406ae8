#pragma once

// Monotone iteration phi_{n+1} = F(phi_n) from the super-solution, with the sandwich
// lower <= phi_{n+1} <= phi_n <= upper asserted at every step.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pswave/error.hpp"
#include "pswave/funcspace.hpp"
#include "pswave/greenkernel.hpp"
#include "pswave/waveop.hpp"

namespace pswave {

struct IterationConfig {
  double tol_fixed = 1e-8;
  double tol_residual = 1e-3;
  int max_iter = 500;
  double mu = 0.05;
  /// Slack allowed in the per-step ordering checks.
  double order_tol = 1e-8;
  /// Start from the lower bound and ascend instead of descending from the upper bound.
  bool ascending = false;
  /// Skip the precondition checks on the bounds (recorded by callers).
  bool waive_bounds = false;

  void validate() const {
    require(tol_fixed > 0.0 && tol_residual > 0.0 && order_tol > 0.0, ErrorCode::InvalidParameter,
            "iteration tolerances must be positive");
    require(max_iter >= 1, ErrorCode::InvalidParameter, "max_iter must be >= 1");
    require(mu >= 0.0, ErrorCode::InvalidParameter, "mu must be >= 0");
  }
};

struct IterationRecord {
  int iter = 0;
  double sup_gap = 0.0;
  double weighted_gap = 0.0;
  /// min(phi_n - lower)
  double lower_margin = 0.0;
  /// min(upper - phi_n)
  double upper_margin = 0.0;
  /// min(phi_{n-1} - phi_n) when descending, min(phi_n - phi_{n-1}) when ascending
  double step_margin = 0.0;
  double residual = std::numeric_limits<double>::quiet_NaN();
  bool in_gamma = false;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  bool converged = false;
  bool residual_ok = false;
};

struct IterationResult {
  Profile profile;
  IterationTrace trace;
};

/// Raised for ordering failures and iteration exhaustion; carries the trace so far.
class IterationError : public Error {
 public:
  IterationError(ErrorCode code, const std::string& detail, IterationTrace trace)
      : Error(code, detail), trace_(std::move(trace)) {}
  const IterationTrace& trace() const noexcept { return trace_; }

 private:
  IterationTrace trace_;
};

namespace detail {

inline double min_difference(const Profile& a, const Profile& b) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) m = std::min(m, a.values[i] - b.values[i]);
  return m;
}

}  // namespace detail

/// Runs the monotone scheme. `params` is used only for the per-step residual of the
/// profile equation. Stops once the sup-norm gap between iterates is below tol_fixed.
inline IterationResult monotone_iterate(const GreenKernel& k, const HOperator& h, const Profile& upper,
                                        const Profile& lower, const IterationConfig& cfg,
                                        std::optional<PolyParams> params = std::nullopt) {
  cfg.validate();
  require_same_grid(upper, lower);
  if (!cfg.waive_bounds) {
    const auto g = is_in_gamma(upper, h.reaction.K);
    require(g.in_gamma, ErrorCode::PreconditionFailed, "upper bound is not in Gamma");
    const auto ord = pointwise_order(lower, upper, 0.0);
    require(ord == Order::leq || ord == Order::equal, ErrorCode::PreconditionFailed,
            std::string("lower bound is not below the upper bound (") + order_name(ord) + ")");
  }

  IterationTrace trace;
  Profile current = cfg.ascending ? lower : upper;
  if (cfg.ascending) current.left_tail_rate = upper.left_tail_rate;
  const WeightedNorm w{cfg.mu};

  for (int n = 1; n <= cfg.max_iter; ++n) {
    Profile next = apply_F(k, h, current);
    if (cfg.ascending) {
      // the lower bound's plateau is not an asymptotic state of the iterates
      next.right_state = upper.right_state;
    }
    IterationRecord rec;
    rec.iter = n;
    const Profile gap = difference(current, next);
    rec.sup_gap = sup_norm(Profile{gap.grid, gap.values, 0.0, 0.0, 0.0});
    rec.weighted_gap = weighted_norm(Profile{gap.grid, gap.values, 0.0, 0.0, 0.0}, w);
    rec.lower_margin = detail::min_difference(next, lower);
    rec.upper_margin = detail::min_difference(upper, next);
    rec.step_margin = cfg.ascending ? detail::min_difference(next, current) : detail::min_difference(current, next);
    if (params) rec.residual = residual(*params, h.reaction, next).interior_sup;
    rec.in_gamma = is_in_gamma(next, h.reaction.K).in_gamma;
    trace.records.push_back(rec);

    if (rec.step_margin < -cfg.order_tol || rec.lower_margin < -cfg.order_tol || rec.upper_margin < -cfg.order_tol) {
      throw IterationError(ErrorCode::OrderingViolated,
                           "iterate " + std::to_string(n) + " breaks the monotone sandwich (step " +
                               format_double(rec.step_margin) + ", lower " + format_double(rec.lower_margin) +
                               ", upper " + format_double(rec.upper_margin) + ")",
                           std::move(trace));
    }
    current = std::move(next);
    if (rec.sup_gap < cfg.tol_fixed) {
      trace.converged = true;
      if (params) trace.residual_ok = rec.residual <= cfg.tol_residual;
      return {std::move(current), std::move(trace)};
    }
  }
  throw IterationError(ErrorCode::MaxIterExceeded,
                       "no convergence within " + std::to_string(cfg.max_iter) + " iterations", std::move(trace));
}

/// sup |F(p) - p|
inline double check_fixed_point(const GreenKernel& k, const HOperator& h, const Profile& p) {
  return max_abs_difference(apply_F(k, h, p), p);
}

enum class LimitKind { connects_0_to_K, intermediate, degenerate };

inline const char* limit_kind_name(LimitKind k) {
  switch (k) {
    case LimitKind::connects_0_to_K: return "connects_0_to_K";
    case LimitKind::intermediate: return "intermediate";
    case LimitKind::degenerate: return "degenerate";
  }
  return "?";
}

struct LimitClass {
  LimitKind kind = LimitKind::degenerate;
  /// right-end plateau value
  double k = 0.0;
  /// reaction at the constant history k
  double f_at_k = 0.0;
};

inline LimitClass classify_limit(const Profile& p, const Reaction& re, double tol) {
  LimitClass lc;
  lc.k = p.values.back();
  lc.f_at_k = apply_reaction(re, lc.k, lc.k);
  if (std::abs(lc.k - re.K) <= tol) {
    lc.kind = LimitKind::connects_0_to_K;
  } else if (std::abs(lc.f_at_k) > tol) {
    // excluded for the continuous problem; signals truncation
    lc.kind = LimitKind::intermediate;
  } else {
    lc.kind = LimitKind::degenerate;
  }
  return lc;
}

struct SmoothnessReport {
  /// max |first / second difference quotient| at scales h, 2h, 4h
  std::array<double, 3> d1_max{};
  std::array<double, 3> d2_max{};
  /// |forward - backward| first and second one-sided quotients at the probe point
  std::array<double, 3> kink_d1_gap{};
  std::array<double, 3> kink_d2_gap{};
  double end_d1 = 0.0;
  double end_d2 = 0.0;
  bool bounded = false;
  bool c1_at_kink = false;
  bool c2_at_kink = false;
  bool ends_flat = false;
};

/// Difference-quotient probes of the regularity gained by one application of F.
/// `kink` is the point where the input to F had its derivative jump.
inline SmoothnessReport smoothness_probe(const Profile& p, double kink = 0.0) {
  SmoothnessReport rep;
  const auto& v = p.values;
  const std::size_t n = p.size();
  require(n >= 17, ErrorCode::GridTooSmall, "smoothness probe needs at least 17 points");
  const double h = p.grid.h;
  const auto kc = static_cast<std::size_t>(std::clamp<long>(std::lround((kink - p.grid.left()) / h), 8,
                                                            static_cast<long>(n) - 9));
  for (int s = 0; s < 3; ++s) {
    const std::size_t m = std::size_t{1} << s;
    const double hs = h * static_cast<double>(m);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t i = m; i + m < n; ++i) {
      d1 = std::max(d1, std::abs(v[i + m] - v[i - m]) / (2.0 * hs));
      d2 = std::max(d2, std::abs(v[i + m] - 2.0 * v[i] + v[i - m]) / (hs * hs));
    }
    rep.d1_max[s] = d1;
    rep.d2_max[s] = d2;
    const double fwd1 = (v[kc + m] - v[kc]) / hs;
    const double bwd1 = (v[kc] - v[kc - m]) / hs;
    const double fwd2 = (v[kc + 2 * m] - 2.0 * v[kc + m] + v[kc]) / (hs * hs);
    const double bwd2 = (v[kc] - 2.0 * v[kc - m] + v[kc - 2 * m]) / (hs * hs);
    rep.kink_d1_gap[s] = std::abs(fwd1 - bwd1);
    rep.kink_d2_gap[s] = std::abs(fwd2 - bwd2);
  }
  const auto consistent = [](const std::array<double, 3>& a) {
    const double hi = std::max({a[0], a[1], a[2]});
    const double lo = std::min({a[0], a[1], a[2]});
    return std::isfinite(hi) && hi - lo <= 0.1 * hi + 1e-12;
  };
  rep.bounded = consistent(rep.d1_max) && consistent(rep.d2_max);
  // A derivative with a jump keeps a scale-independent gap; a continuous one shrinks with the scale.
  const auto shrinks = [](const std::array<double, 3>& g, double floor) {
    return g[0] <= floor || g[0] <= 0.5 * g[2];
  };
  rep.c1_at_kink = shrinks(rep.kink_d1_gap, 1e-9);
  rep.c2_at_kink = shrinks(rep.kink_d2_gap, 1e-7);
  const Profile d1 = finite_diff(p, 1);
  const Profile d2 = finite_diff(p, 2);
  rep.end_d1 = std::max(std::abs(d1.values.front()), std::abs(d1.values.back()));
  rep.end_d2 = std::max(std::abs(d2.values.front()), std::abs(d2.values.back()));
  rep.ends_flat = rep.end_d1 < 1e-4 && rep.end_d2 < 1e-4;
  return rep;
}

}  // namespace pswave
