#pragma once

// Piecewise-exponential super- and sub-solutions of the delayed logistic profile
// equation  c phi''' + D phi'' - c phi' + phi(xi - r)(1 - phi(xi)) = 0,
// their pointwise certification with analytic derivatives, and the delay scan.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pswave/charpoly.hpp"
#include "pswave/error.hpp"
#include "pswave/funcspace.hpp"
#include "pswave/waveop.hpp"

namespace pswave {

/// Value and first three derivatives at a point.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

struct SuperSolutionParams {
  double eta1 = 0.0;

  void validate() const { require(eta1 > 0.0, ErrorCode::InvalidParameter, "eta1 must be > 0"); }

  /// 1/2 e^{eta1 xi} for xi < 0, 1 - 1/2 e^{-eta1 xi} for xi >= 0.
  Jet jet(double xi, Side side = Side::right) const {
    if (xi < 0.0 || (xi == 0.0 && side == Side::left)) {
      const double e = 0.5 * std::exp(eta1 * xi);
      return {e, eta1 * e, eta1 * eta1 * e, eta1 * eta1 * eta1 * e};
    }
    const double w = 0.5 * std::exp(-eta1 * xi);
    return {1.0 - w, eta1 * w, -eta1 * eta1 * w, eta1 * eta1 * eta1 * w};
  }
  double value(double xi) const { return jet(xi).v; }
};

struct SubSolutionParams {
  double eta1 = 0.0;
  double eps = 0.0;
  double q = 1.0;
  double xi1 = -1.0;
  double d1 = 0.0;

  /// Fills in the plateau value d1 = 1/2 (1 - q e^{eps xi1}) e^{eta1 xi1}.
  static SubSolutionParams make(double eta1, double eps, double q, double xi1) {
    SubSolutionParams s{eta1, eps, q, xi1, 0.0};
    s.d1 = 0.5 * (1.0 - q * std::exp(eps * xi1)) * std::exp(eta1 * xi1);
    return s;
  }

  /// Checks the window against the active root pair, the lower bound on q and the plateau.
  void validate(const DelayedCharParams& dp, const PositiveRootPair& pair) const {
    require(eta1 > 0.0 && eps > 0.0, ErrorCode::InvalidParameter, "eta1 and eps must be positive");
    if (!(eta1 + eps < pair.eta2)) fail(ErrorCode::InvalidEpsilon, "eta1 + eps must stay below eta2");
    require(xi1 < 0.0, ErrorCode::InvalidParameter, "xi1 must be negative");
    require(q >= min_q(dp.c, dp.D, eta1, eps), ErrorCode::InvalidParameter,
            "q below max{1, -1/(2 Delta_0(eta1 + eps))}");
    if (!(d1 > 0.0 && d1 < 1.0)) fail(ErrorCode::InvalidPlateau, "plateau d1 must lie in (0, 1)");
  }

  static double min_q(double c, double D, double eta1, double eps) {
    const double d0 = eval_delta_0(c, D, eta1 + eps);
    return d0 < 0.0 ? std::max(1.0, -1.0 / (2.0 * d0)) : std::numeric_limits<double>::infinity();
  }

  /// 1/2 (1 - q e^{eps xi}) e^{eta1 xi} for xi < xi1, the constant d1 afterwards.
  Jet jet(double xi, Side side = Side::right) const {
    if (xi < xi1 || (xi == xi1 && side == Side::left)) {
      const double a = 0.5 * std::exp(eta1 * xi);
      const double m = eta1 + eps;
      const double b = 0.5 * q * std::exp(m * xi);
      return {a - b, eta1 * a - m * b, eta1 * eta1 * a - m * m * b, eta1 * eta1 * eta1 * a - m * m * m * b};
    }
    return {d1, 0.0, 0.0, 0.0};
  }
  double value(double xi) const { return jet(xi).v; }
};

inline Profile build_supersolution(const SuperSolutionParams& sp, const Grid& grid) {
  sp.validate();
  Profile p = Profile::sample(grid, [&](double x) { return sp.value(x); }, 0.0, 1.0);
  p.left_tail_rate = sp.eta1;
  return p;
}

inline Profile build_subsolution(const SubSolutionParams& sp, const Grid& grid) {
  if (!(sp.d1 > 0.0 && sp.d1 < 1.0)) fail(ErrorCode::InvalidPlateau, "plateau d1 must lie in (0, 1)");
  Profile p = Profile::sample(grid, [&](double x) { return sp.value(x); }, 0.0, sp.d1);
  p.left_tail_rate = sp.eta1;
  return p;
}

/// Default sub-solution: eps = min(eta1, (eta2 - eta1)/2), q = max{1, -1/(2 Delta_0(eta1+eps))} + 0.1,
/// xi1 at the maximum of the left branch, e^{eps xi1} = eta1 / (q (eta1 + eps)).
inline SubSolutionParams default_sub_params(const PositiveRootPair& pair, const DelayedCharParams& dp,
                                            std::optional<double> eps_override = std::nullopt) {
  const double eta1 = pair.eta1;
  const double eps = eps_override.value_or(std::min(eta1, 0.5 * (pair.eta2 - eta1)));
  if (!check_epsilon_window(dp, eta1, pair.eta2, eps)) {
    fail(ErrorCode::InvalidEpsilon, "Delta_r(eta1 + eps) is not negative");
  }
  double q = SubSolutionParams::min_q(dp.c, dp.D, eta1, eps);
  if (!std::isfinite(q)) q = std::max(1.0, -1.0 / (2.0 * eval_delta_r(dp, eta1 + eps)));
  q += 0.1;
  const double xi1 = std::log(eta1 / (q * (eta1 + eps))) / eps;
  auto sp = SubSolutionParams::make(eta1, eps, q, xi1);
  if (!(sp.d1 > 0.0 && sp.d1 < 1.0)) fail(ErrorCode::InvalidPlateau, "plateau d1 must lie in (0, 1)");
  return sp;
}

/// Extremal left-hand side over the grid points of one case region.
struct CaseExtremum {
  bool present = false;
  double value = 0.0;
  std::size_t points = 0;
};

struct BoundsCheck {
  std::array<CaseExtremum, 3> cases{};
  /// max LHS for a super-solution, min LHS for a sub-solution
  double extremum = 0.0;
  bool pass = false;
};

inline constexpr double kBoundsTol = 1e-10;

namespace detail {

inline double profile_lhs(double c, double D, const Jet& j, double delayed, const Reaction& re) {
  return c * j.d3 + D * j.d2 - c * j.d1 + apply_reaction(re, j.v, delayed);
}

inline void record(CaseExtremum& ce, double v, bool take_max) {
  if (!ce.present) {
    ce = {true, v, 1};
    return;
  }
  ce.value = take_max ? std::max(ce.value, v) : std::min(ce.value, v);
  ++ce.points;
}

inline void finish(BoundsCheck& bc, bool take_max) {
  bool any = false;
  for (const auto& ce : bc.cases) {
    if (!ce.present) continue;
    bc.extremum = !any ? ce.value : (take_max ? std::max(bc.extremum, ce.value) : std::min(bc.extremum, ce.value));
    any = true;
  }
  bc.pass = any && (take_max ? bc.extremum <= kBoundsTol : bc.extremum >= -kBoundsTol);
}

}  // namespace detail

/// max over the grid of  c phi''' + D phi'' - c phi' + phi(xi - r)(1 - phi(xi))  for the
/// super-solution; cases xi < 0, 0 <= xi < r, xi >= r. The kink at 0 is evaluated from both sides.
inline BoundsCheck verify_supersolution(const SuperSolutionParams& sp, const Grid& grid, double c, double D,
                                        const Reaction& re) {
  const double r = re.delay;
  BoundsCheck bc;
  const auto eval = [&](double x, Side side) {
    const Jet j = sp.jet(x, side);
    const double lhs = detail::profile_lhs(c, D, j, sp.value(x - r), re);
    const bool left_branch = x < 0.0 || (x == 0.0 && side == Side::left);
    const std::size_t idx = left_branch ? 0 : (x < r ? 1 : 2);
    detail::record(bc.cases[idx], lhs, true);
  };
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    eval(x, Side::right);
    if (x == 0.0) eval(x, Side::left);
  }
  detail::finish(bc, true);
  return bc;
}

/// min over the grid of the same left-hand side for the sub-solution; cases xi < xi1,
/// xi1 <= xi < xi1 + r, xi >= xi1 + r. The kink xi1 is evaluated one-sidedly from the left.
inline BoundsCheck verify_subsolution(const SubSolutionParams& sp, const Grid& grid, double c, double D,
                                      const Reaction& re) {
  const double r = re.delay;
  BoundsCheck bc;
  const auto eval = [&](double x, Side side) {
    const Jet j = sp.jet(x, side);
    const double lhs = detail::profile_lhs(c, D, j, sp.value(x - r), re);
    const bool left_branch = x < sp.xi1 || (x == sp.xi1 && side == Side::left);
    const std::size_t idx = left_branch ? 0 : (x < sp.xi1 + r ? 1 : 2);
    detail::record(bc.cases[idx], lhs, false);
  };
  for (std::size_t i = 0; i < grid.n; ++i) eval(grid.x(i), Side::right);
  if (sp.xi1 > grid.left() && sp.xi1 < grid.right()) eval(sp.xi1, Side::left);
  detail::finish(bc, false);
  return bc;
}

/// Everything the application needs at one delay: roots, both bounds and their checks.
struct BoundsSetup {
  DelayedCharParams params;
  PositiveRootPair pair;
  SuperSolutionParams super;
  SubSolutionParams sub;
  BoundsCheck super_check;
  BoundsCheck sub_check;

  bool pass() const { return super_check.pass && sub_check.pass; }
};

inline BoundsSetup make_bounds(const DelayedCharParams& dp, const Grid& grid,
                               std::optional<double> eps_override = std::nullopt) {
  BoundsSetup b;
  b.params = dp;
  b.pair = solve_delayed_positive_roots(dp);
  b.super = {b.pair.eta1};
  b.sub = default_sub_params(b.pair, dp, eps_override);
  b.sub.validate(dp, b.pair);
  const auto re = Reaction::delayed_logistic(dp.r);
  b.super_check = verify_supersolution(b.super, grid, dp.c, dp.D, re);
  b.sub_check = verify_subsolution(b.sub, grid, dp.c, dp.D, re);
  return b;
}

struct DelayProbe {
  double r = 0.0;
  bool pass = false;
  double eta1 = std::numeric_limits<double>::quiet_NaN();
  double super_max = std::numeric_limits<double>::quiet_NaN();
  double sub_min = std::numeric_limits<double>::quiet_NaN();
  std::string failure;
};

struct DelayScanOptions {
  double resolution = 1e-3;
  double r_max = 10.0;
  /// Number of equally spaced r in (0, r_star] re-checked for non-monotone failures.
  int recheck_samples = 20;
};

struct DelayScan {
  double r_star = 0.0;
  /// Smallest failing r seen by the bisection (infinite when capped at r_max).
  double r_fail = std::numeric_limits<double>::infinity();
  std::vector<DelayProbe> probes;
  std::vector<double> nonmonotone;
};

inline DelayProbe probe_delay(double c, double D, double r, const Grid& grid) {
  DelayProbe pr;
  pr.r = r;
  try {
    const auto b = make_bounds({c, D, r}, grid);
    pr.eta1 = b.pair.eta1;
    pr.super_max = b.super_check.extremum;
    pr.sub_min = b.sub_check.extremum;
    pr.pass = b.pass();
    if (!pr.pass) pr.failure = b.super_check.pass ? "subsolution" : "supersolution";
  } catch (const Error& e) {
    pr.failure = error_name(e.code());
  }
  return pr;
}

/// Largest delay (to `resolution`) for which both bounds certify, found by doubling
/// then bisection; afterwards (0, r_star] is re-sampled to expose non-monotone failures.
inline DelayScan find_max_delay(double c, double D, const Grid& grid, DelayScanOptions opt = {}) {
  DelayScan scan;
  auto base = probe_delay(c, D, 0.0, grid);
  scan.probes.push_back(base);
  if (!base.pass) fail(ErrorCode::BaseCaseFails, "bounds do not certify at r = 0 (" + base.failure + ")");

  double lo = 0.0;
  double hi = opt.resolution;
  for (;;) {
    if (hi >= opt.r_max) {
      auto cap = probe_delay(c, D, opt.r_max, grid);
      scan.probes.push_back(cap);
      if (cap.pass) {
        scan.r_star = opt.r_max;
        return scan;
      }
      hi = opt.r_max;
      break;
    }
    auto pr = probe_delay(c, D, hi, grid);
    scan.probes.push_back(pr);
    if (!pr.pass) break;
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > opt.resolution) {
    const double mid = 0.5 * (lo + hi);
    auto pr = probe_delay(c, D, mid, grid);
    scan.probes.push_back(pr);
    (pr.pass ? lo : hi) = mid;
  }
  scan.r_star = lo;
  scan.r_fail = hi;
  for (int j = 1; j <= opt.recheck_samples && scan.r_star > 0.0; ++j) {
    const double r = scan.r_star * j / opt.recheck_samples;
    auto pr = probe_delay(c, D, r, grid);
    if (!pr.pass) scan.nonmonotone.push_back(r);
    scan.probes.push_back(pr);
  }
  return scan;
}

}  // namespace pswave
