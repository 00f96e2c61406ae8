#pragma once

// A kinked test function with closed-form piecewise derivatives:
//   psi(s) = e^{-s^2} p(s),  p = 1 + kappa |s| + nu s |s|,
// so psi' jumps by -2 kappa and psi'' by -4 nu at s = 0 (left minus right limit).

#include <array>
#include <cmath>

#include "pswave/greenkernel.hpp"

struct Manufactured {
  double kappa = 0.0;
  double nu = 0.0;

  /// psi, psi', psi'', psi''' (right-sided at s = 0)
  std::array<double, 4> derivs(double s) const {
    const double sg = s < 0.0 ? -1.0 : 1.0;
    const double p = 1.0 + sg * (kappa * s + nu * s * s);
    const double p1 = sg * (kappa + 2.0 * nu * s), p2 = sg * 2.0 * nu, p3 = 0.0;
    const double E = std::exp(-s * s);
    return {E * p, E * (p1 - 2.0 * s * p), E * (p2 - 4.0 * s * p1 + (4.0 * s * s - 2.0) * p),
            E * (p3 - 6.0 * s * p2 + (12.0 * s * s - 6.0) * p1 + (-8.0 * s * s * s + 12.0 * s) * p)};
  }

  double d1_jump() const { return -2.0 * kappa; }
  double d2_jump() const { return -4.0 * nu; }

  /// c psi''' + D psi'' - c psi' - beta psi, piecewise
  double L(const pswave::GreenKernel& k, double s) const {
    const auto d = derivs(s);
    return k.c * d[3] + k.D * d[2] - k.c * d[1] - k.beta * d[0];
  }
};
