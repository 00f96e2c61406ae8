#pragma once

// Closed-form Green's function of  L phi = c phi''' + D phi'' - c phi' - beta phi.
//
//   G(xi) = A3 exp(lambda3 xi)                          xi < 0
//   G(xi) = -(A1 exp(lambda1 xi) + A2 exp(lambda2 xi))  xi >= 0
//
// G and G' are continuous at 0 and G'' jumps by 1/c there. The kernel is kept
// symbolic so every integral against an exponential has an exact antiderivative.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "pswave/charpoly.hpp"
#include "pswave/error.hpp"

namespace pswave {

enum class Side { left, right };

struct GreenKernel {
  RootTriple roots;
  double c = 0.0;
  double D = 0.0;
  double beta = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
  double A3 = 0.0;
  /// min(-lambda2, lambda3); admissible weights need mu below it.
  double decay_rate = 0.0;
};

struct KernelDerivs {
  double G = 0.0;
  double dG = 0.0;
  double d2G = 0.0;
};

inline GreenKernel build_kernel(const PolyParams& p, const RootTriple& r) {
  p.validate();
  const auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
  };
  if (close(r.lambda1, r.lambda2) || close(r.lambda2, r.lambda3) || close(r.lambda1, r.lambda3)) {
    fail(ErrorCode::DistinctRealRootsRequired, "Green kernel needs three distinct roots");
  }
  const double l1 = r.lambda1, l2 = r.lambda2, l3 = r.lambda3;
  const double lead = p.alpha * p.c;
  GreenKernel k;
  k.roots = r;
  k.c = lead;
  k.D = p.D;
  k.beta = p.beta;
  k.A1 = -1.0 / (lead * (l1 - l2) * (l1 - l3));
  k.A2 = -1.0 / (lead * (l2 - l1) * (l2 - l3));
  k.A3 = -1.0 / (lead * (l3 - l1) * (l3 - l2));
  k.decay_rate = std::min(-l2, l3);
  return k;
}

inline GreenKernel build_kernel(const PolyParams& p) { return build_kernel(p, solve_kernel_roots(p)); }

inline double eval_G(const GreenKernel& k, double xi) {
  if (xi < 0.0) return k.A3 * std::exp(k.roots.lambda3 * xi);
  return -(k.A1 * std::exp(k.roots.lambda1 * xi) + k.A2 * std::exp(k.roots.lambda2 * xi));
}

/// One-sided derivatives; `side` only matters at xi == 0.
inline KernelDerivs eval_G_derivs(const GreenKernel& k, double xi, Side side = Side::right) {
  const bool left = xi < 0.0 || (xi == 0.0 && side == Side::left);
  if (left) {
    const double l3 = k.roots.lambda3;
    const double e = k.A3 * std::exp(l3 * xi);
    return {e, l3 * e, l3 * l3 * e};
  }
  const double l1 = k.roots.lambda1, l2 = k.roots.lambda2;
  const double e1 = k.A1 * std::exp(l1 * xi);
  const double e2 = k.A2 * std::exp(l2 * xi);
  return {-(e1 + e2), -(l1 * e1 + l2 * e2), -(l1 * l1 * e1 + l2 * l2 * e2)};
}

/// Closed-form integral of G over the real line; equals -1/beta.
inline double kernel_total_integral(const GreenKernel& k) {
  return k.A3 / k.roots.lambda3 + k.A1 / k.roots.lambda1 + k.A2 / k.roots.lambda2;
}

namespace detail {

// (exp(x) - 1) / x, continuous at 0.
inline double expm1_ratio(double x) { return x == 0.0 ? 1.0 : std::expm1(x) / x; }

}  // namespace detail

/// Integral of G(u) exp(-rho (u - u0)) over [u0, inf).
inline double kernel_upper_integral(const GreenKernel& k, double u0, double rho = 0.0) {
  const double l1 = k.roots.lambda1, l2 = k.roots.lambda2, l3 = k.roots.lambda3;
  const double m = std::max(u0, 0.0);
  double sum = k.A1 * std::exp(l1 * m - rho * (m - u0)) / (l1 - rho) +
               k.A2 * std::exp(l2 * m - rho * (m - u0)) / (l2 - rho);
  if (u0 < 0.0) {
    // A3 * int_{u0}^{0} exp(l3 u - rho (u - u0)) du
    sum += k.A3 * std::exp(l3 * u0) * (-u0) * detail::expm1_ratio(-(l3 - rho) * u0);
  }
  return sum;
}

/// Integral of G(u) exp(rho (u - u0)) over (-inf, u0].
inline double kernel_lower_integral(const GreenKernel& k, double u0, double rho = 0.0) {
  const double l1 = k.roots.lambda1, l2 = k.roots.lambda2, l3 = k.roots.lambda3;
  const double m = std::min(u0, 0.0);
  double sum = k.A3 * std::exp(l3 * m + rho * (m - u0)) / (l3 + rho);
  if (u0 > 0.0) {
    // -A_i * int_0^{u0} exp(l_i u + rho (u - u0)) du
    sum -= k.A1 * std::exp(l1 * u0) * u0 * detail::expm1_ratio(-(l1 + rho) * u0);
    sum -= k.A2 * std::exp(l2 * u0) * u0 * detail::expm1_ratio(-(l2 + rho) * u0);
  }
  return sum;
}

/// Exact integral of G(t - s) over the half-line beyond `cut`:
///   left:  s in (-inf, cut]    right: s in [cut, inf)
/// A positive `rate` weights the half-line by exp(-rate |s - cut|).
inline double tail_mass(const GreenKernel& k, double t, double cut, Side side, double rate = 0.0) {
  const double u0 = t - cut;
  return side == Side::left ? kernel_upper_integral(k, u0, rate) : kernel_lower_integral(k, u0, rate);
}

/// C_mu = int |G(u)| exp(mu |u|) du, finite only for mu < decay_rate.
inline double weighted_abs_integral(const GreenKernel& k, double mu) {
  require(mu >= 0.0, ErrorCode::InvalidParameter, "mu must be >= 0");
  if (!(mu < k.decay_rate)) fail(ErrorCode::MuTooLarge, "mu must stay below the kernel decay rate");
  return -k.A3 / (k.roots.lambda3 - mu) - k.A1 / (k.roots.lambda1 + mu) - k.A2 / (k.roots.lambda2 + mu);
}

/// amplitude * exp(-rate |y - cut|) beyond a truncation point; rate 0 is a constant extension.
struct ExpTail {
  double amplitude = 0.0;
  double rate = 0.0;
};

namespace detail {

/// Weights of  int_0^h e^{rate u} g(u) du  for g linear between g(0) and g(h):
/// returns {w_near, w_far} multiplying g(0) and g(h).
inline std::pair<double, double> linear_cell_weights(double rate, double h) {
  const double z = rate * h;
  double i0, i1;  // int_0^1 e^{z s} ds, int_0^1 s e^{z s} ds
  if (std::abs(z) < 0.5) {
    i0 = 0.0;
    i1 = 0.0;
    double term = 1.0;  // z^k / k!
    for (int k = 0; k < 30; ++k) {
      i0 += term / (k + 1);
      i1 += term / (k + 2);
      term *= z / (k + 1);
    }
  } else {
    i0 = std::expm1(z) / z;
    i1 = (std::exp(z) * (z - 1.0) + 1.0) / (z * z);
  }
  return {h * (i0 - i1), h * i1};
}

}  // namespace detail

/// Computes out[i] = int G(x_i - y) g(y) dy for nodes x_i = x0 + i h.
///
/// Inside [x0, x_{n-1}] g is replaced by its piecewise-linear interpolant and each
/// exponential piece of G is integrated against it exactly (second order; the weights
/// tend to the trapezoid weights as h -> 0). The pieces run as first-order recursions,
/// so the cost is O(n). Beyond the ends g is replaced by the sum of the given tails,
/// integrated exactly.
inline std::vector<double> convolve(const GreenKernel& k, double x0, double h, std::span<const double> g,
                                    std::span<const ExpTail> left_tail = {},
                                    std::span<const ExpTail> right_tail = {}) {
  const std::size_t n = g.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  const double l1 = k.roots.lambda1, l2 = k.roots.lambda2, l3 = k.roots.lambda3;
  const double e1 = std::exp(l1 * h), e2 = std::exp(l2 * h), e3 = std::exp(-l3 * h);
  const auto [w1n, w1f] = detail::linear_cell_weights(l1, h);
  const auto [w2n, w2f] = detail::linear_cell_weights(l2, h);
  const auto [w3n, w3f] = detail::linear_cell_weights(-l3, h);

  // y <= x_i: G(x_i - y) = -(A1 e^{l1 (x_i - y)} + A2 e^{l2 (x_i - y)})
  double p1 = 0.0, p2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      p1 = e1 * p1 + w1n * g[i] + w1f * g[i - 1];
      p2 = e2 * p2 + w2n * g[i] + w2f * g[i - 1];
    }
    out[i] = -(k.A1 * p1 + k.A2 * p2);
  }
  // y >= x_i: G(x_i - y) = A3 e^{l3 (x_i - y)}
  double q = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    if (j + 1 < n) q = e3 * q + w3n * g[j] + w3f * g[j + 1];
    out[j] += k.A3 * q;
  }

  const double xl = x0;
  const double xr = x0 + static_cast<double>(n - 1) * h;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = x0 + static_cast<double>(i) * h;
    for (const auto& tail : left_tail) {
      if (tail.amplitude != 0.0) out[i] += tail.amplitude * tail_mass(k, t, xl, Side::left, tail.rate);
    }
    for (const auto& tail : right_tail) {
      if (tail.amplitude != 0.0) out[i] += tail.amplitude * tail_mass(k, t, xr, Side::right, tail.rate);
    }
  }
  return out;
}

/// Certifies L G = delta numerically: max over sample points t of
/// |int G(t - s) (L psi)(s) ds - psi(t)| for the Gaussian bump psi = a exp(-(s/w)^2),
/// with L psi evaluated analytically and the integral by `convolve` at step h.
inline double green_identity_check(const GreenKernel& k, double width, double h = 0.01, double amplitude = 1.0) {
  require(width > 0.0 && h > 0.0, ErrorCode::InvalidParameter, "width and step must be positive");
  const double w2 = width * width;
  const auto psi = [&](double s) { return amplitude * std::exp(-s * s / w2); };
  const auto L_psi = [&](double s) {
    const double e = psi(s);
    const double d1 = -2.0 * s / w2 * e;
    const double d2 = (4.0 * s * s / (w2 * w2) - 2.0 / w2) * e;
    const double d3 = (-8.0 * s * s * s / (w2 * w2 * w2) + 12.0 * s / (w2 * w2)) * e;
    return k.c * d3 + k.D * d2 - k.c * d1 - k.beta * e;
  };

  const auto half = static_cast<long>(std::ceil(12.0 * width / h));
  const double x0 = -static_cast<double>(half) * h;
  std::vector<double> g(static_cast<std::size_t>(2 * half + 1));
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = L_psi(x0 + static_cast<double>(i) * h);
  const auto conv = convolve(k, x0, h, g);

  // Probe points at the nodes nearest to multiples of width/4 inside [-2w, 2w].
  double worst = 0.0;
  for (int m = -8; m <= 8; ++m) {
    const double target = 0.25 * width * m;
    const auto i = static_cast<std::size_t>(std::lround((target - x0) / h));
    const double t = x0 + static_cast<double>(i) * h;
    worst = std::max(worst, std::abs(conv[i] - psi(t)));
  }
  return worst;
}

}  // namespace pswave
