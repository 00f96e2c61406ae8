#pragma once

// Direct integration of  u_t = D u_xx + alpha u_xxt + u(x, t - tau)(1 - u(x, t)/K)
// on [-X, X] with Dirichlet states 0 / K, used to cross-check computed profiles:
// a wave u(x, t) = phi(x + c t) should translate left at speed c without changing shape.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pswave/error.hpp"
#include "pswave/funcspace.hpp"
#include "pswave/waveop.hpp"

namespace pswave {

struct SchemeConfig {
  double dt = 1e-3;
  double dx = 0.01;
  double T = 20.0;
  double D = 1.0;
  double alpha = 1.0;
  double tau = 0.0;
  double X = 200.0;
  double K = 1.0;

  /// Number of steps spanning the delay; tau must be a multiple of dt.
  std::size_t delay_steps() const { return static_cast<std::size_t>(std::lround(tau / dt)); }
  std::size_t total_steps() const { return static_cast<std::size_t>(std::lround(T / dt)); }

  void validate() const {
    require(dt > 0.0 && dx > 0.0 && T > 0.0 && X > 0.0, ErrorCode::InvalidParameter,
            "dt, dx, T and X must be positive");
    require(D > 0.0 && alpha >= 0.0 && K > 0.0, ErrorCode::InvalidParameter, "need D > 0, alpha >= 0, K > 0");
    require(tau >= 0.0, ErrorCode::InvalidParameter, "tau must be >= 0");
    const double m = tau / dt;
    require(std::abs(m - std::round(m)) * dt <= 1e-12, ErrorCode::InvalidParameter, "dt must divide tau");
    require(X / dx >= 3.0, ErrorCode::InvalidParameter, "spatial grid too coarse");
  }
};

/// Solution slices u^{n-m}, ..., u^n in a ring buffer; `head` indexes u^n.
struct PdeState {
  Grid grid;
  std::vector<std::vector<double>> slices;
  std::size_t head = 0;
  double t = 0.0;

  const std::vector<double>& current() const { return slices[head]; }
  /// u^{n-m}; the slot right after the head in ring order.
  const std::vector<double>& delayed() const { return slices[(head + 1) % slices.size()]; }
  std::size_t history_size() const { return slices.size(); }
};

/// Constant-coefficient tridiagonal solver for (1 + 2s) u_i - s (u_{i-1} + u_{i+1}) on the
/// interior nodes, factorized once.
class ImplicitOperator {
 public:
  ImplicitOperator() = default;
  ImplicitOperator(std::size_t interior, double s) : s_(s), inv_(interior), upper_(interior) {
    const double diag = 1.0 + 2.0 * s;
    double prev = 0.0;
    for (std::size_t i = 0; i < interior; ++i) {
      const double piv = diag + s * prev;  // diag - (-s) * upper_{i-1}
      if (!(std::abs(piv) > 1e-300)) fail(ErrorCode::SingularSystem, "zero pivot in tridiagonal solve");
      inv_[i] = 1.0 / piv;
      upper_[i] = -s * inv_[i];
      prev = upper_[i];
    }
  }

  /// Solves in place; rhs holds the interior right-hand side.
  void solve(std::span<double> rhs) const {
    const std::size_t n = rhs.size();
    if (n == 0) return;
    rhs[0] *= inv_[0];
    for (std::size_t i = 1; i < n; ++i) rhs[i] = (rhs[i] + s_ * rhs[i - 1]) * inv_[i];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= upper_[i] * rhs[i + 1];
  }

 private:
  double s_ = 0.0;
  std::vector<double> inv_;
  std::vector<double> upper_;
};

/// Stepper holding the factorized implicit operator for one configuration.
class PdeStepper {
 public:
  explicit PdeStepper(const SchemeConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    grid_ = Grid::make(cfg_.X, cfg_.dx);
    const double inv_dx2 = 1.0 / (grid_.h * grid_.h);
    d_ = cfg_.D * inv_dx2;
    s_ = (cfg_.alpha + cfg_.dt * cfg_.D) * inv_dx2;
    op_ = ImplicitOperator(grid_.n - 2, s_);
    rhs_.resize(grid_.n - 2);
    re_ = Reaction::delayed_logistic(cfg_.tau, cfg_.K);
  }

  const Grid& grid() const { return grid_; }
  const SchemeConfig& config() const { return cfg_; }

  /// (I - (alpha + dt D) Dxx) u^{n+1} = (I - alpha Dxx) u^n + dt u^{n-m} (1 - u^n / K),
  /// solved for the increment u^{n+1} - u^n so that equilibria give an exactly zero
  /// right-hand side. The Dirichlet ends keep their initial values (0 and K for a front).
  void step(PdeState& st) const {
    require(st.grid.same_as(grid_) && st.history_size() == cfg_.delay_steps() + 1, ErrorCode::GridMismatch,
            "state does not match the scheme configuration");
    const auto& u = st.current();
    const auto& ud = st.delayed();
    const std::size_t n = grid_.n;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double lap = u[i - 1] - 2.0 * u[i] + u[i + 1];
      rhs_[i - 1] = cfg_.dt * (d_ * lap + apply_reaction(re_, u[i], ud[i]));
    }
    op_.solve(rhs_);
    // u^{n-m} is no longer needed: its slot receives u^{n+1} (the same slot when m = 0)
    const std::size_t slot = (st.head + 1) % st.slices.size();
    auto& out = st.slices[slot];
    out.front() = u.front();
    out.back() = u.back();
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = u[i] + rhs_[i - 1];
    st.head = slot;
    st.t += cfg_.dt;
  }

 private:
  SchemeConfig cfg_;
  Grid grid_;
  double d_ = 0.0;
  double s_ = 0.0;
  ImplicitOperator op_;
  mutable std::vector<double> rhs_;
  Reaction re_;
};

inline void pde_step(PdeState& st, const SchemeConfig& cfg) { PdeStepper(cfg).step(st); }

/// State whose slices are all the constant v.
inline PdeState constant_state(const SchemeConfig& cfg, double v) {
  cfg.validate();
  PdeState st;
  st.grid = Grid::make(cfg.X, cfg.dx);
  st.slices.assign(cfg.delay_steps() + 1, std::vector<double>(st.grid.n, v));
  st.head = st.slices.size() - 1;
  return st;
}

/// u(x, -j dt) = phi(x - shift - c j dt) for j = 0..m. Beyond its grid the profile is
/// extended by its asymptotic model; the left end must carry an exponential tail model
/// if it is not covered, and the right end must be covered.
inline PdeState seed_from_profile(const Profile& p, double c, const SchemeConfig& cfg, double shift = 0.0) {
  cfg.validate();
  require(c >= 0.0, ErrorCode::InvalidParameter, "speed c must be >= 0");
  const double need_left = -cfg.X - shift - c * cfg.tau;
  const double need_right = cfg.X - shift;
  const double slack = 1e-9 * std::max(1.0, cfg.X);
  if (need_right > p.grid.right() + slack) {
    fail(ErrorCode::DomainTooSmall, "profile ends at " + format_double(p.grid.right()) + " but the PDE needs " +
                                        format_double(need_right));
  }
  if (need_left < p.grid.left() - slack && !(p.left_tail_rate > 0.0)) {
    fail(ErrorCode::DomainTooSmall, "profile starts at " + format_double(p.grid.left()) +
                                        " but the PDE needs " + format_double(need_left));
  }
  PdeState st = constant_state(cfg, 0.0);
  const std::size_t m = cfg.delay_steps();
  // slot k holds u^{-(m-k)}; the head (slot m) is the current slice
  for (std::size_t k = 0; k <= m; ++k) {
    const double lag = c * static_cast<double>(m - k) * cfg.dt;
    auto& s = st.slices[k];
    for (std::size_t i = 0; i < st.grid.n; ++i) s[i] = sample_at(p, st.grid.x(i) - shift - lag);
    s.front() = 0.0;
    s.back() = cfg.K;
  }
  st.head = m;
  return st;
}

/// Position where the slice crosses `level` (linear interpolation); nullopt without a
/// crossing, NonMonotoneFront for more than one.
inline std::optional<double> level_crossing(const Grid& g, std::span<const double> u, double level) {
  std::optional<double> pos;
  int crossings = 0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    const double a = u[i - 1] - level, b = u[i] - level;
    if ((a < 0.0 && b >= 0.0) || (a >= 0.0 && b < 0.0)) {
      ++crossings;
      pos = g.x(i - 1) + g.h * a / (a - b);
    }
  }
  if (crossings > 1) {
    fail(ErrorCode::NonMonotoneFront, "slice crosses the half level " + std::to_string(crossings) + " times");
  }
  return pos;
}

namespace detail {

inline double interp(const Grid& g, std::span<const double> u, double x) {
  const double s = (x - g.left()) / g.h;
  if (s <= 0.0) return u.front();
  auto i = static_cast<std::size_t>(s);
  if (i >= u.size() - 1) return u.back();
  const double f = s - static_cast<double>(i);
  return u[i] + f * (u[i + 1] - u[i]);
}

}  // namespace detail

struct SpeedEstimate {
  bool degenerate = false;
  double c_est = 0.0;
  double shape_drift = 0.0;
  std::vector<double> times;
  std::vector<double> positions;
};

/// Accumulates front positions and the shape drift relative to the first slice.
/// The front moves left for u = phi(x + c t), so the speed is minus the fitted slope.
class FrontTracker {
 public:
  FrontTracker(Grid grid, double K) : grid_(grid), K_(K) {}

  void add(double t, std::span<const double> u) {
    if (degenerate_) return;
    const auto pos = level_crossing(grid_, u, 0.5 * K_);
    if (!pos) {
      degenerate_ = true;
      return;
    }
    if (ref_.empty()) {
      ref_.assign(u.begin(), u.end());
      ref_pos_ = *pos;
    } else {
      // compare u(. + pos, t) with u(. + ref_pos, 0) where both are defined
      const double d = *pos - ref_pos_;
      double worst = 0.0;
      for (std::size_t i = 0; i < ref_.size(); ++i) {
        const double y = grid_.x(i) + d;
        if (y < grid_.left() || y > grid_.right()) continue;
        worst = std::max(worst, std::abs(detail::interp(grid_, u, y) - ref_[i]));
      }
      drift_ = std::max(drift_, worst);
    }
    times_.push_back(t);
    positions_.push_back(*pos);
  }

  SpeedEstimate estimate() const {
    SpeedEstimate e;
    e.degenerate = degenerate_ || times_.size() < 2;
    e.times = times_;
    e.positions = positions_;
    e.shape_drift = drift_;
    if (e.degenerate) return e;
    const double n = static_cast<double>(times_.size());
    double st = 0.0, sp = 0.0;
    for (std::size_t i = 0; i < times_.size(); ++i) {
      st += times_[i];
      sp += positions_[i];
    }
    const double mt = st / n, mp = sp / n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < times_.size(); ++i) {
      num += (times_[i] - mt) * (positions_[i] - mp);
      den += (times_[i] - mt) * (times_[i] - mt);
    }
    e.c_est = den > 0.0 ? -num / den : 0.0;
    return e;
  }

 private:
  Grid grid_;
  double K_;
  bool degenerate_ = false;
  std::vector<double> ref_;
  double ref_pos_ = 0.0;
  double drift_ = 0.0;
  std::vector<double> times_;
  std::vector<double> positions_;
};

inline SpeedEstimate measure_front_speed(const Grid& g, std::span<const double> times,
                                         std::span<const std::vector<double>> slices, double K = 1.0) {
  require(times.size() == slices.size(), ErrorCode::InvalidParameter, "times and slices differ in length");
  FrontTracker tr(g, K);
  for (std::size_t i = 0; i < times.size(); ++i) tr.add(times[i], slices[i]);
  return tr.estimate();
}

struct ValidationOptions {
  /// Offset of the profile's origin inside the PDE domain.
  double shift = 0.0;
  /// Spacing of the front samples in time.
  double sample_dt = 0.1;
  double speed_tol = 0.02;
  /// Drift tolerance as a fraction of K.
  double drift_tol = 0.02;
};

struct ValidationReport {
  double c = 0.0;
  SpeedEstimate speed;
  double speed_error = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  bool pass = false;
  std::string verdict;
};

/// Integrates `st` to cfg.T, tracking the front every sample_dt.
inline ValidationReport evolve_and_measure(PdeState st, double c, const SchemeConfig& cfg,
                                           const ValidationOptions& opt = {}) {
  const PdeStepper stepper(cfg);
  FrontTracker tracker(stepper.grid(), cfg.K);
  const auto every = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(opt.sample_dt / cfg.dt)));
  const std::size_t steps = cfg.total_steps();
  ValidationReport rep;
  rep.c = c;
  rep.min_value = *std::min_element(st.current().begin(), st.current().end());
  rep.max_value = *std::max_element(st.current().begin(), st.current().end());
  tracker.add(st.t, st.current());
  for (std::size_t n = 1; n <= steps; ++n) {
    stepper.step(st);
    if (n % every == 0 || n == steps) {
      const auto& u = st.current();
      rep.min_value = std::min(rep.min_value, *std::min_element(u.begin(), u.end()));
      rep.max_value = std::max(rep.max_value, *std::max_element(u.begin(), u.end()));
      tracker.add(st.t, u);
    }
  }
  rep.speed = tracker.estimate();
  if (rep.speed.degenerate) {
    rep.verdict = "degenerate";
    return rep;
  }
  rep.speed_error = c > 0.0 ? std::abs(rep.speed.c_est - c) / c : std::abs(rep.speed.c_est);
  rep.pass = rep.speed_error <= opt.speed_tol && rep.speed.shape_drift <= opt.drift_tol * cfg.K;
  rep.verdict = rep.pass ? "pass" : "fail";
  return rep;
}

/// Seeds from the profile with the traveling-wave history at `seed_speed` and checks the
/// evolution against the claimed speed c.
inline ValidationReport run_validation(const Profile& p, double c, const SchemeConfig& cfg,
                                       const ValidationOptions& opt = {},
                                       std::optional<double> seed_speed = std::nullopt) {
  return evolve_and_measure(seed_from_profile(p, seed_speed.value_or(c), cfg, opt.shift), c, cfg, opt);
}

struct ComparisonProbe {
  /// min over sampled times and nodes of upper - lower
  double min_gap = 0.0;
  std::size_t samples = 0;
  bool ordered = false;
};

/// Evolves two ordered states side by side and checks that the order persists.
inline ComparisonProbe comparison_probe(PdeState lower, PdeState upper, const SchemeConfig& cfg,
                                        double sample_dt = 0.1, double tol = 1e-8) {
  const PdeStepper stepper(cfg);
  const auto every = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(sample_dt / cfg.dt)));
  ComparisonProbe pr;
  const auto sample = [&] {
    const auto& a = lower.current();
    const auto& b = upper.current();
    double g = b[0] - a[0];
    for (std::size_t i = 1; i < a.size(); ++i) g = std::min(g, b[i] - a[i]);
    pr.min_gap = pr.samples == 0 ? g : std::min(pr.min_gap, g);
    ++pr.samples;
  };
  sample();
  const std::size_t steps = cfg.total_steps();
  for (std::size_t n = 1; n <= steps; ++n) {
    stepper.step(lower);
    stepper.step(upper);
    if (n % every == 0 || n == steps) sample();
  }
  pr.ordered = pr.min_gap >= -tol;
  return pr;
}

}  // namespace pswave
