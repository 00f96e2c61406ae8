#pragma once

// Characteristic functions of the linearized profile equation.
//
//   kernel cubic     Delta(l)   = alpha*c*l^3 + D*l^2 - c*l - beta
//   delayed function Delta_r(l) = c*l^3 + D*l^2 - c*l + exp(-l*r)
//
// The kernel cubic fixes the Green's function of the beta-shifted operator; the
// delayed function governs the leading edge of the delayed logistic wave.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "pswave/error.hpp"

namespace pswave {

struct PolyParams {
  double c = 10.0;
  double D = 1.0;
  double beta = 1.0;
  double alpha = 1.0;

  void validate() const {
    require(c > 0.0 && std::isfinite(c), ErrorCode::InvalidParameter, "wave speed c must be > 0");
    require(D > 0.0 && std::isfinite(D), ErrorCode::InvalidParameter, "diffusion D must be > 0");
    require(beta > 0.0 && std::isfinite(beta), ErrorCode::InvalidParameter, "shift beta must be > 0");
    require(alpha == 1.0, ErrorCode::InvalidParameter, "nonclassical coefficient alpha is fixed to 1");
  }
};

/// Ordered real roots lambda1 < lambda2 < 0 < lambda3 of the kernel cubic.
struct RootTriple {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;

  std::array<double, 3> as_array() const { return {lambda1, lambda2, lambda3}; }
};

struct DelayedCharParams {
  double c = 10.0;
  double D = 1.0;
  double r = 0.0;

  void validate() const {
    require(c > 0.0 && std::isfinite(c), ErrorCode::InvalidParameter, "wave speed c must be > 0");
    require(D > 0.0 && std::isfinite(D), ErrorCode::InvalidParameter, "diffusion D must be > 0");
    require(r >= 0.0 && std::isfinite(r), ErrorCode::InvalidParameter, "delay r must be >= 0");
  }
};

struct PositiveRootPair {
  double eta1 = 0.0;
  double eta2 = 0.0;
};

inline std::complex<double> eval_delta(const PolyParams& p, std::complex<double> lambda) {
  const auto l2 = lambda * lambda;
  return p.alpha * p.c * l2 * lambda + p.D * l2 - p.c * lambda - p.beta;
}

inline double eval_delta(const PolyParams& p, double lambda) {
  return ((p.alpha * p.c * lambda + p.D) * lambda - p.c) * lambda - p.beta;
}

inline double eval_delta_prime(const PolyParams& p, double lambda) {
  return (3.0 * p.alpha * p.c * lambda + 2.0 * p.D) * lambda - p.c;
}

namespace detail {

/// Discriminant of the monic cubic x^3 + a x^2 + b x + c0 together with the sum of
/// the magnitudes of its terms (the scale for a relative zero test).
struct Discriminant {
  double value;
  double scale;
};

inline Discriminant monic_discriminant(double a, double b, double c0) {
  const double t1 = 18.0 * a * b * c0;
  const double t2 = -4.0 * a * a * a * c0;
  const double t3 = a * a * b * b;
  const double t4 = -4.0 * b * b * b;
  const double t5 = -27.0 * c0 * c0;
  return {t1 + t2 + t3 + t4 + t5,
          std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4) + std::abs(t5)};
}

inline double newton_polish(const PolyParams& p, double x) {
  double best = x;
  double best_res = std::abs(eval_delta(p, x));
  for (int it = 0; it < 50 && best_res > 0.0; ++it) {
    const double d = eval_delta_prime(p, x);
    if (d == 0.0) break;
    x -= eval_delta(p, x) / d;
    const double res = std::abs(eval_delta(p, x));
    if (res < best_res) {
      best = x;
      best_res = res;
    } else {
      break;
    }
  }
  return best;
}

}  // namespace detail

/// Roots of the kernel cubic via the trigonometric closed form of the depressed
/// cubic, polished by Newton on the original coefficients.
inline RootTriple solve_kernel_roots(const PolyParams& p) {
  p.validate();
  const double lead = p.alpha * p.c;
  const double a = p.D / lead;
  const double b = -p.c / lead;
  const double c0 = -p.beta / lead;

  const auto disc = detail::monic_discriminant(a, b, c0);
  if (disc.value <= 1e-9 * disc.scale) {
    fail(ErrorCode::DistinctRealRootsRequired,
         "kernel cubic has a repeated root or a complex pair (discriminant " +
             std::to_string(disc.value) + ")");
  }

  const double Q = (a * a - 3.0 * b) / 9.0;
  const double R = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c0) / 54.0;
  const double sq = std::sqrt(Q);
  const double theta = std::acos(std::clamp(R / (sq * sq * sq), -1.0, 1.0));
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::array<double, 3> x{-2.0 * sq * std::cos(theta / 3.0) - a / 3.0,
                          -2.0 * sq * std::cos((theta + two_pi) / 3.0) - a / 3.0,
                          -2.0 * sq * std::cos((theta - two_pi) / 3.0) - a / 3.0};
  for (auto& xi : x) xi = detail::newton_polish(p, xi);
  std::sort(x.begin(), x.end());

  if (!(x[0] < x[1] && x[1] < 0.0 && 0.0 < x[2])) {
    fail(ErrorCode::DistinctRealRootsRequired, "roots do not follow lambda1 < lambda2 < 0 < lambda3");
  }
  return {x[0], x[1], x[2]};
}

/// min(lambda3, -lambda2, -lambda1): distance of the spectrum from the imaginary axis.
inline double spectral_gap_mu0(const RootTriple& roots) {
  return std::min({roots.lambda3, -roots.lambda2, -roots.lambda1});
}

inline double eval_delta_r(const DelayedCharParams& p, double lambda) {
  return ((p.c * lambda + p.D) * lambda - p.c) * lambda + std::exp(-lambda * p.r);
}

/// Delta_0, the cubic obtained at r = 0.
inline double eval_delta_0(double c, double D, double lambda) {
  return eval_delta_r({c, D, 0.0}, lambda);
}

struct PositiveRootScan {
  double step = 1e-3;
  double bisection_tol = 1e-12;
};

/// Upper end of the bracketing scan; Delta_r > 0 beyond it for every r >= 0.
inline double positive_root_scan_bound(const DelayedCharParams& p) { return 1.0 + p.D / p.c + 1.0 / p.c; }

inline PositiveRootPair solve_delayed_positive_roots(const DelayedCharParams& p, PositiveRootScan scan = {}) {
  p.validate();
  const double upper = positive_root_scan_bound(p);
  const auto f = [&](double l) { return eval_delta_r(p, l); };

  const auto bisect = [&](double lo, double hi) {
    double flo = f(lo);
    while (hi - lo > scan.bisection_tol) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (fm == 0.0) return mid;
      if ((fm > 0.0) == (flo > 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  std::array<double, 2> roots{};
  int found = 0;
  const auto n = static_cast<long>(std::ceil(upper / scan.step));
  double prev_x = 0.0;
  double prev_f = f(0.0);
  for (long i = 1; i <= n && found < 2; ++i) {
    const double x = std::min(upper, static_cast<double>(i) * scan.step);
    const double fx = f(x);
    if ((prev_f > 0.0) != (fx > 0.0)) roots[found++] = bisect(prev_x, x);
    prev_x = x;
    prev_f = fx;
  }
  if (found < 2) {
    fail(ErrorCode::NoPositivePair, "Delta_r has no sign-changing positive root pair on (0, " +
                                        std::to_string(upper) + "]; c may be below the minimal speed");
  }
  return {roots[0], roots[1]};
}

/// True iff Delta_r(eta1 + eps) < 0.
inline bool check_epsilon_window(const DelayedCharParams& p, double eta1, double eta2, double eps) {
  if (!(eps > 0.0) || !(eta1 + eps < eta2)) {
    fail(ErrorCode::InvalidEpsilon, "epsilon must satisfy 0 < eps and eta1 + eps < eta2");
  }
  return eval_delta_r(p, eta1 + eps) < 0.0;
}

}  // namespace pswave
