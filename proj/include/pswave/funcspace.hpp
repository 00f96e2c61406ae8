#pragma once

// Profiles on a truncated uniform grid, with the asymptotic states used outside it.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pswave/error.hpp"

namespace pswave {

/// Uniform grid on [-L, L], symmetric about 0, with an odd point count.
struct Grid {
  double half_width = 100.0;
  double h = 0.01;
  std::size_t n = 0;

  static Grid make(double L, double h) {
    require(L > 0.0 && h > 0.0 && std::isfinite(L) && std::isfinite(h), ErrorCode::InvalidParameter,
            "grid needs L > 0 and h > 0");
    const auto half = static_cast<std::size_t>(std::lround(L / h));
    require(half >= 1, ErrorCode::InvalidParameter, "grid spacing larger than half width");
    return {static_cast<double>(half) * h, h, 2 * half + 1};
  }

  std::size_t center() const { return (n - 1) / 2; }
  double x(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(center())) * h;
  }
  double left() const { return x(0); }
  double right() const { return x(n - 1); }

  bool same_as(const Grid& o) const { return n == o.n && h == o.h; }
};

/// Grid function plus the constant states it takes beyond the grid ends.
///
/// When `left_tail_rate` is positive the left extension models the leading edge of a
/// front instead of cutting it off at the grid end (see `left_tail_model`).
struct Profile {
  Grid grid;
  std::vector<double> values;
  double left_state = 0.0;
  double right_state = 1.0;
  double left_tail_rate = 0.0;

  static Profile constant(const Grid& g, double v) { return {g, std::vector<double>(g.n, v), v, v, 0.0}; }

  template <class Fn>
  static Profile sample(const Grid& g, Fn&& fn, double left_state, double right_state) {
    Profile p{g, std::vector<double>(g.n), left_state, right_state, 0.0};
    for (std::size_t i = 0; i < g.n; ++i) p.values[i] = fn(g.x(i));
    return p;
  }

  std::size_t size() const { return values.size(); }
};

struct WeightedNorm {
  double mu = 0.05;
};

inline void require_same_grid(const Profile& p, const Profile& q) {
  require(p.grid.same_as(q.grid) && p.size() == q.size(), ErrorCode::GridMismatch,
          "profiles live on different grids");
}

/// sup_xi exp(-mu |xi|) |phi(xi)|, with the constant tails bounded by their value at |xi| = L.
inline double weighted_norm(const Profile& p, WeightedNorm w) {
  double m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    m = std::max(m, std::exp(-w.mu * std::abs(p.grid.x(i))) * std::abs(p.values[i]));
  }
  const double tail = std::max(std::abs(p.left_state), std::abs(p.right_state)) *
                      std::exp(-w.mu * p.grid.half_width);
  return std::max(m, tail);
}

inline double sup_norm(const Profile& p) {
  double m = std::max(std::abs(p.left_state), std::abs(p.right_state));
  for (double v : p.values) m = std::max(m, std::abs(v));
  return m;
}

/// Pointwise difference p - q (states included).
inline Profile difference(const Profile& p, const Profile& q) {
  require_same_grid(p, q);
  Profile d = p;
  for (std::size_t i = 0; i < p.size(); ++i) d.values[i] = p.values[i] - q.values[i];
  d.left_state = p.left_state - q.left_state;
  d.right_state = p.right_state - q.right_state;
  d.left_tail_rate = 0.0;
  return d;
}

inline double max_abs_difference(const Profile& p, const Profile& q) {
  require_same_grid(p, q);
  double m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, std::abs(p.values[i] - q.values[i]));
  return m;
}

enum class Order { leq, geq, equal, incomparable };

inline const char* order_name(Order o) {
  switch (o) {
    case Order::leq: return "leq";
    case Order::geq: return "geq";
    case Order::equal: return "equal";
    case Order::incomparable: return "incomparable";
  }
  return "?";
}

inline Order pointwise_order(const Profile& p, const Profile& q, double tol = 0.0) {
  require_same_grid(p, q);
  bool below = true, above = true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p.values[i] - q.values[i];
    if (d > tol) below = false;
    if (d < -tol) above = false;
  }
  if (below && above) return Order::equal;
  if (below) return Order::leq;
  if (above) return Order::geq;
  return Order::incomparable;
}

struct GammaTolerance {
  double monotone = 1e-6;
  double endpoint = 1e-4;
};

struct GammaReport {
  bool in_gamma = false;
  double worst_monotone_violation = 0.0;
  double left_gap = 0.0;
  double right_gap = 0.0;
};

/// Membership in the set of nondecreasing profiles joining 0 to K.
inline GammaReport is_in_gamma(const Profile& p, double K = 1.0, GammaTolerance tol = {}) {
  GammaReport r;
  for (std::size_t i = 1; i < p.size(); ++i) {
    r.worst_monotone_violation = std::max(r.worst_monotone_violation, p.values[i - 1] - p.values[i]);
  }
  r.left_gap = p.values.empty() ? 0.0 : std::abs(p.values.front());
  r.right_gap = p.values.empty() ? 0.0 : std::abs(p.values.back() - K);
  r.in_gamma = !p.values.empty() && r.worst_monotone_violation <= tol.monotone &&
               r.left_gap <= tol.endpoint && r.right_gap <= tol.endpoint;
  return r;
}

/// Leading-edge extension  left_state + a1 e^{rho s} + a2 e^{2 rho s},  s = xi - x_0 <= 0.
/// The second exponential is what the logistic nonlinearity generates from the first;
/// dropping it shifts the neutral e^{rho s} mode a little on every application of F.
struct TailModel {
  double a1 = 0.0;
  double a2 = 0.0;
  double rho = 0.0;

  double at(double s) const {
    const double e = std::exp(rho * s);
    return (a1 + a2 * e) * e;
  }
};

/// Fits the two amplitudes to the grid values at x_0 and about 1/rho further right.
inline TailModel left_tail_model(const Profile& p) {
  TailModel m{p.values.front() - p.left_state, 0.0, p.left_tail_rate};
  if (!(m.rho > 0.0) || p.size() < 2) return m;
  const auto j = static_cast<std::size_t>(
      std::clamp<double>(std::round(1.0 / (m.rho * p.grid.h)), 1.0, static_cast<double>(p.size() - 1)));
  const double E = std::exp(m.rho * static_cast<double>(j) * p.grid.h);
  const double v0 = m.a1;
  const double v1 = p.values[j] - p.left_state;
  const double a2 = (v1 - v0 * E) / (E * E - E);
  const double a1 = v0 - a2;
  // keep the extension nonnegative and nondecreasing; otherwise the data is not a
  // leading edge at this rate and the single exponential is used
  if (a1 >= 0.0 && a1 + 2.0 * a2 >= 0.0) {
    m.a1 = a1;
    m.a2 = a2;
  }
  return m;
}

/// Two-point interpolation inside the grid, the asymptotic extension outside.
/// With a tail model the weights are exact for constants and e^{rho xi} (and still lie
/// in [0, 1]); plain linear interpolation would translate the leading edge slightly.
inline double sample_at(const Profile& p, double xi) {
  const Grid& g = p.grid;
  const double xl = g.left();
  if (xi < xl) {
    if (p.left_tail_rate > 0.0) return p.left_state + left_tail_model(p).at(xi - xl);
    return p.left_state;
  }
  if (xi > g.right()) return p.right_state;
  const double s = (xi - xl) / g.h;
  auto i = static_cast<std::size_t>(s);
  if (i >= g.n - 1) return p.values.back();
  double frac = s - static_cast<double>(i);
  if (p.left_tail_rate > 0.0) frac = std::expm1(p.left_tail_rate * frac * g.h) / std::expm1(p.left_tail_rate * g.h);
  return p.values[i] + frac * (p.values[i + 1] - p.values[i]);
}

/// Finite-difference derivative of order 1, 2 or 3: fourth-order central stencils in
/// the interior, second-order one-sided stencils on the three points nearest each end.
inline Profile finite_diff(const Profile& p, int order) {
  require(order >= 1 && order <= 3, ErrorCode::InvalidParameter, "derivative order must be 1, 2 or 3");
  const std::size_t n = p.size();
  require(n >= 7, ErrorCode::GridTooSmall, "finite differences need at least 7 grid points");
  const auto& f = p.values;
  const double h = p.grid.h;
  Profile out{p.grid, std::vector<double>(n), 0.0, 0.0, 0.0};

  // forward one-sided stencil applied from index i in direction dir (+1 / -1)
  const auto one_sided = [&](std::size_t i, int dir) {
    const auto at = [&](int k) { return f[static_cast<std::size_t>(static_cast<long>(i) + dir * k)]; };
    switch (order) {
      case 1: return dir * (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
      case 2: return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h);
      default:
        return dir * (-5.0 * at(0) + 18.0 * at(1) - 24.0 * at(2) + 14.0 * at(3) - 3.0 * at(4)) / (2.0 * h * h * h);
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (i < 3) {
      out.values[i] = one_sided(i, +1);
    } else if (i + 3 >= n) {
      out.values[i] = one_sided(i, -1);
    } else {
      switch (order) {
        case 1:
          out.values[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
          break;
        case 2:
          out.values[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h);
          break;
        default:
          out.values[i] = (f[i - 3] - 8.0 * f[i - 2] + 13.0 * f[i - 1] - 13.0 * f[i + 1] + 8.0 * f[i + 2] - f[i + 3]) /
                          (8.0 * h * h * h);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV serialization: header `xi,value`, one row per grid point.

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string profile_to_csv(const Profile& p) {
  std::string out = "xi,value\n";
  out.reserve(p.size() * 48);
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += format_double(p.grid.x(i));
    out += ',';
    out += format_double(p.values[i]);
    out += '\n';
  }
  return out;
}

/// Parses `xi,value` rows; the abscissae must be uniform and symmetric about 0.
inline Profile profile_from_csv(std::istream& in, double left_state = 0.0, double right_state = 1.0) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::IoError, "empty profile CSV");
  require(line.rfind("xi,value", 0) == 0, ErrorCode::IoError, "profile CSV header must be 'xi,value'");
  std::vector<double> xs, vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    require(comma != std::string::npos, ErrorCode::IoError, "malformed CSV row: " + line);
    try {
      xs.push_back(std::stod(line.substr(0, comma)));
      vs.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      fail(ErrorCode::IoError, "malformed CSV row: " + line);
    }
  }
  require(xs.size() >= 3 && xs.size() % 2 == 1, ErrorCode::IoError, "profile CSV needs an odd number (>= 3) of rows");
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  Grid g = Grid::make(0.5 * (xs.back() - xs.front()), h);
  require(g.n == xs.size(), ErrorCode::IoError, "profile CSV abscissae are not a symmetric uniform grid");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(std::abs(xs[i] - g.x(i)) <= 1e-9 * std::max(1.0, g.half_width), ErrorCode::IoError,
            "profile CSV abscissae are not uniform");
  }
  return {g, std::move(vs), left_state, right_state, 0.0};
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorCode::IoError, "cannot open " + path + " for writing");
  f << text;
  require(static_cast<bool>(f), ErrorCode::IoError, "write failed for " + path);
}

}  // namespace pswave
