#pragma once

// The beta-shifted nonlinearity H and the fixed-point map F = -L^{-1} H = -G * H(phi).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pswave/charpoly.hpp"
#include "pswave/error.hpp"
#include "pswave/funcspace.hpp"
#include "pswave/greenkernel.hpp"

namespace pswave {

enum class ReactionKind { delayed_logistic };

/// Single-delay reaction f(phi(xi), phi(xi - r)).
struct Reaction {
  ReactionKind kind = ReactionKind::delayed_logistic;
  double K = 1.0;
  double lipschitz = 2.0;
  double delay = 0.0;

  static Reaction delayed_logistic(double r, double K = 1.0) {
    require(r >= 0.0 && std::isfinite(r), ErrorCode::InvalidParameter, "delay r must be >= 0");
    require(K > 0.0, ErrorCode::InvalidParameter, "carrying state K must be > 0");
    // |df/du_now| + |df/du_delayed| <= 2 on [0, K]^2
    return {ReactionKind::delayed_logistic, K, 2.0, r};
  }
};

inline double apply_reaction(const Reaction& re, double u_now, double u_delayed) {
  return u_delayed * (1.0 - u_now / re.K);
}

struct HOperator {
  double beta = 1.0;
  Reaction reaction;

  double at(double u_now, double u_delayed) const { return beta * u_now + apply_reaction(reaction, u_now, u_delayed); }
  /// H at the constant history u.
  double at_constant(double u) const { return at(u, u); }
};

/// Samples ordered history pairs lo <= hi in [0, K]^2 (and the corners of the square)
/// and checks  f(hi) - f(lo) + beta (hi(0) - lo(0)) >= 0.
inline bool check_quasimonotone(const HOperator& h, std::size_t samples, std::uint64_t seed = 0) {
  const double K = h.reaction.K;
  const auto holds = [&](double lo_now, double lo_del, double hi_now, double hi_del) {
    const double lhs = apply_reaction(h.reaction, hi_now, hi_del) - apply_reaction(h.reaction, lo_now, lo_del) +
                       h.beta * (hi_now - lo_now);
    return lhs >= -1e-14 * K;
  };
  for (double a : {0.0, K}) {
    for (double b : {0.0, K}) {
      for (double c : {0.0, K}) {
        for (double d : {0.0, K}) {
          if (a <= c && b <= d && !holds(a, b, c, d)) return false;
        }
      }
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, K);
  for (std::size_t s = 0; s < samples; ++s) {
    double x0 = u(rng), x1 = u(rng), y0 = u(rng), y1 = u(rng);
    if (x0 > y0) std::swap(x0, y0);
    if (x1 > y1) std::swap(x1, y1);
    if (!holds(x0, x1, y0, y1)) return false;
  }
  return true;
}

inline constexpr double kRangeTol = 1e-8;

inline Profile apply_H(const HOperator& h, const Profile& p) {
  const double K = h.reaction.K;
  const double r = h.reaction.delay;
  Profile out{p.grid, std::vector<double>(p.size()), h.at_constant(p.left_state), h.at_constant(p.right_state), 0.0};
  const auto lag = r / p.grid.h;
  const auto lag_steps = static_cast<long>(std::lround(lag));
  const bool on_grid = std::abs(lag - static_cast<double>(lag_steps)) < 1e-9;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double u = p.values[i];
    if (u < -kRangeTol || u > K + kRangeTol) {
      fail(ErrorCode::RangeViolation, "profile value " + format_double(u) + " outside [0, K]");
    }
    double ud;
    if (on_grid && static_cast<long>(i) >= lag_steps) {
      ud = p.values[i - static_cast<std::size_t>(lag_steps)];
    } else {
      ud = sample_at(p, p.grid.x(i) - r);
    }
    out.values[i] = h.at(u, ud);
  }
  return out;
}

namespace detail {

inline std::vector<ExpTail> left_h_tail(const HOperator& h, const Profile& p) {
  if (p.left_tail_rate > 0.0 && p.left_state == 0.0) {
    // phi = a1 e^{rho s} + a2 e^{2 rho s} beyond the left end, phi(. - r) = b1 e^{rho s} + b2 e^{2 rho s}
    const auto m = left_tail_model(p);
    const double rho = m.rho;
    const double b1 = m.a1 * std::exp(-rho * h.reaction.delay);
    const double b2 = m.a2 * std::exp(-2.0 * rho * h.reaction.delay);
    const double iK = 1.0 / h.reaction.K;
    return {{h.beta * m.a1 + b1, rho},
            {h.beta * m.a2 + b2 - b1 * m.a1 * iK, 2.0 * rho},
            {-(b1 * m.a2 + b2 * m.a1) * iK, 3.0 * rho},
            {-b2 * m.a2 * iK, 4.0 * rho}};
  }
  return {{h.at_constant(p.left_state), 0.0}};
}

}  // namespace detail

/// F(phi)(xi) = -int G(xi - y) H(phi)(y) dy over the whole line: product integration
/// on the grid, exact integrals for the tails beyond it.
inline Profile apply_F(const GreenKernel& k, const HOperator& h, const Profile& p) {
  const Profile hp = apply_H(h, p);
  const auto left = detail::left_h_tail(h, p);
  const std::vector<ExpTail> right{{hp.right_state, 0.0}};
  auto conv = convolve(k, p.grid.left(), p.grid.h, hp.values, left, right);
  for (double& v : conv) v = -v;
  return {p.grid, std::move(conv), hp.left_state / h.beta, hp.right_state / h.beta, p.left_tail_rate};
}

/// A point where phi' (and possibly phi'') jumps; jumps are left limit minus right limit.
struct Kink {
  double location = 0.0;
  double d1_jump = 0.0;
  double d2_jump = 0.0;
};

/// For phi that is C^3 between the kinks,
///   int G(t - s) (L phi)(s) ds = phi(t) + jump_correction(t)
/// where L phi is taken piecewise.
inline double jump_correction(const GreenKernel& k, double t, std::span<const Kink> kinks) {
  double sum = 0.0;
  for (const auto& kink : kinks) {
    const auto g = eval_G_derivs(k, t - kink.location);
    sum += (k.c * g.dG + k.D * g.G) * kink.d1_jump + k.c * g.G * kink.d2_jump;
  }
  return sum;
}

/// apply_F with the kink contributions removed; a piecewise solution of the profile
/// equation is a fixed point of this map.
inline Profile jump_corrected_F(const GreenKernel& k, const HOperator& h, const Profile& p,
                                std::span<const Kink> kinks) {
  for (const auto& kink : kinks) {
    if (!(kink.location > p.grid.left() && kink.location < p.grid.right())) {
      fail(ErrorCode::KinkOutsideDomain, "kink at " + format_double(kink.location) + " outside the grid");
    }
  }
  Profile out = apply_F(k, h, p);
  if (kinks.empty()) return out;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] -= jump_correction(k, p.grid.x(i), kinks);
  return out;
}

struct ResidualReport {
  double interior_sup = 0.0;
  double band_sup = 0.0;
  double band_width = 0.0;
};

/// sup |alpha c phi''' + D phi'' - c phi' + f(phi(xi), phi(xi - r))| with finite
/// differences, split into the interior and a band of width max(r, 5h) at each end.
inline ResidualReport residual(const PolyParams& params, const Reaction& re, const Profile& p) {
  const Profile d1 = finite_diff(p, 1);
  const Profile d2 = finite_diff(p, 2);
  const Profile d3 = finite_diff(p, 3);
  ResidualReport rep;
  rep.band_width = std::max(re.delay, 5.0 * p.grid.h);
  const double lo = p.grid.left() + rep.band_width;
  const double hi = p.grid.right() - rep.band_width;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = p.grid.x(i);
    const double f = apply_reaction(re, p.values[i], sample_at(p, x - re.delay));
    const double res = std::abs(params.alpha * params.c * d3.values[i] + params.D * d2.values[i] -
                                params.c * d1.values[i] + f);
    if (x >= lo && x <= hi) {
      rep.interior_sup = std::max(rep.interior_sup, res);
    } else {
      rep.band_sup = std::max(rep.band_sup, res);
    }
  }
  return rep;
}

struct LipschitzConstants {
  double C_mu = 0.0;
  double H_lip = 0.0;
  double F_lip = 0.0;
};

/// Weighted-norm Lipschitz bound  ||F phi - F psi||_mu <= C_mu (L_f e^{mu r} + beta) ||phi - psi||_mu.
inline LipschitzConstants lipschitz_constants(const GreenKernel& k, const HOperator& h, WeightedNorm w) {
  LipschitzConstants out;
  out.C_mu = weighted_abs_integral(k, w.mu);
  out.H_lip = h.reaction.lipschitz * std::exp(w.mu * h.reaction.delay) + h.beta;
  out.F_lip = out.C_mu * out.H_lip;
  return out;
}

}  // namespace pswave
