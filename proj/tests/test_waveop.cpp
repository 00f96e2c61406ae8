#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "manufactured.hpp"
#include "oracles.hpp"
#include "pswave/waveop.hpp"

using namespace pswave;

namespace {

const PolyParams kRef{10.0, 1.0, 1.0, 1.0};

TEST(ApplyReaction, Values) {
  const auto re = Reaction::delayed_logistic(0.0);
  EXPECT_EQ(apply_reaction(re, 0.0, 0.0), 0.0);
  EXPECT_EQ(apply_reaction(re, 1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(apply_reaction(re, 0.5, 0.25), 0.125);
  EXPECT_THROW(Reaction::delayed_logistic(-1.0), Error);
}

TEST(Quasimonotone, Threshold) {
  EXPECT_TRUE(check_quasimonotone({1.0, Reaction::delayed_logistic(0.0)}, 100000, 1));
  EXPECT_FALSE(check_quasimonotone({0.1, Reaction::delayed_logistic(0.0)}, 100000, 1));
  // beta >= L_f suffices
  EXPECT_TRUE(check_quasimonotone({2.0, Reaction::delayed_logistic(0.3)}, 100000, 2));
}

TEST(ApplyH, Constants) {
  const auto g = Grid::make(5.0, 0.1);
  const HOperator h{1.0, Reaction::delayed_logistic(0.3)};
  for (double v : apply_H(h, Profile::constant(g, 0.0)).values) EXPECT_EQ(v, 0.0);
  for (double v : apply_H(h, Profile::constant(g, 1.0)).values) EXPECT_DOUBLE_EQ(v, 1.0);
  auto bad = Profile::constant(g, 0.5);
  bad.values[3] = 1.5;
  try {
    apply_H(h, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RangeViolation);
  }
}

TEST(ApplyH, DelayedReadMatchesDirectFormula) {
  const auto g = Grid::make(5.0, 0.1);
  const double r = 0.25;  // off-grid
  const HOperator h{1.0, Reaction::delayed_logistic(r)};
  const auto p = Profile::sample(g, [](double x) { return 0.5 * (1.0 + std::tanh(x)); }, 0.0, 1.0);
  const auto out = apply_H(h, p);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    // linear interpolation of the grid values at x - r, zero beyond the left end
    double ud = 0.0;
    if (x - r >= g.left()) {
      const double s = (x - r - g.left()) / g.h;
      const auto j = static_cast<std::size_t>(s);
      ud = p.values[j] + (s - j) * (p.values[j + 1] - p.values[j]);
    }
    EXPECT_NEAR(out.values[i], p.values[i] + ud * (1.0 - p.values[i]), 1e-14);
  }
}

TEST(ApplyH, RangeAndMonotoneOnGammaInput) {
  const auto g = Grid::make(20.0, 0.05);
  const HOperator h{1.0, Reaction::delayed_logistic(0.5)};
  const auto p = Profile::sample(g, [](double x) { return 0.5 * (1.0 + std::tanh(x)); }, 0.0, 1.0);
  const auto out = apply_H(h, p);
  for (std::size_t i = 0; i < g.n; ++i) {
    EXPECT_GE(out.values[i], 0.0);
    EXPECT_LE(out.values[i], 1.0 + 1e-15);
    if (i > 0) {
      EXPECT_GE(out.values[i], out.values[i - 1] - 1e-15);
    }
  }
}

Profile random_profile(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Profile p = Profile::constant(g, 0.0);
  p.right_state = 1.0;
  // smooth random front plus bounded noise
  const double a = 0.2 + 2.0 * u(rng), x0 = -5.0 + 10.0 * u(rng);
  for (std::size_t i = 0; i < g.n; ++i) {
    p.values[i] = std::clamp(0.5 * (1.0 + std::tanh(a * (g.x(i) - x0))) + 0.1 * (u(rng) - 0.5), 0.0, 1.0);
  }
  return p;
}

TEST(ApplyF, ConstantsAreFixedPoints) {
  const auto k = build_kernel(kRef);
  const auto g = Grid::make(100.0, 0.01);
  for (double r : {0.0, 0.2}) {
    const HOperator h{1.0, Reaction::delayed_logistic(r)};
    const auto z = apply_F(k, h, Profile::constant(g, 0.0));
    const auto o = apply_F(k, h, Profile::constant(g, 1.0));
    for (std::size_t i = 0; i < g.n; ++i) {
      EXPECT_NEAR(z.values[i], 0.0, 1e-8);
      EXPECT_NEAR(o.values[i], 1.0, 1e-8);
    }
    EXPECT_EQ(o.left_state, 1.0);
    EXPECT_EQ(o.right_state, 1.0);
  }
}

TEST(ApplyF, MatchesDirectQuadrature) {
  const auto k = build_kernel(kRef);
  const auto g = Grid::make(15.0, 0.05);
  const HOperator h{1.0, Reaction::delayed_logistic(0.0)};
  const auto p = Profile::sample(g, [](double x) { return 0.5 * (1.0 + std::tanh(x)); }, 0.0, 1.0);
  const auto out = apply_F(k, h, p);
  const auto hp = apply_H(h, p);
  const auto inner = oracle::direct_convolution([&](double u) { return eval_G(k, u); }, g.left(), g.h, hp.values);
  for (std::size_t i = 0; i < g.n; i += 37) {
    const double t = g.x(i);
    // right tail: constant H = 1 beyond the grid
    const double right = oracle::integrate([&](double s) { return eval_G(k, t - s); }, g.right(), g.right() + 400.0);
    EXPECT_NEAR(out.values[i], -(inner[i] + right), 1e-9) << t;
  }
}

TEST(ApplyF, OrderPreservationAndRange) {
  const auto k = build_kernel(kRef);
  const auto g = Grid::make(20.0, 0.05);
  std::mt19937_64 rng(99);
  for (double r : {0.0, 0.13}) {
    const HOperator h{1.0, Reaction::delayed_logistic(r)};
    for (int t = 0; t < 10; ++t) {
      auto lo = random_profile(g, rng), hi = random_profile(g, rng);
      for (std::size_t i = 0; i < g.n; ++i) {
        if (lo.values[i] > hi.values[i]) std::swap(lo.values[i], hi.values[i]);
      }
      const auto hl = apply_H(h, lo), hh = apply_H(h, hi);
      const auto fl = apply_F(k, h, lo), fh = apply_F(k, h, hi);
      for (std::size_t i = 0; i < g.n; ++i) {
        EXPECT_LE(hl.values[i], hh.values[i] + 1e-10);
        EXPECT_LE(fl.values[i], fh.values[i] + 1e-10);
        EXPECT_GE(fl.values[i], -1e-8);
        EXPECT_LE(fh.values[i], 1.0 + 1e-8);
      }
    }
  }
}

TEST(ApplyF, MapsGammaIntoGamma) {
  const auto k = build_kernel(kRef);
  const auto g = Grid::make(100.0, 0.01);
  const HOperator h{1.0, Reaction::delayed_logistic(0.0)};
  const auto p = Profile::sample(g, [](double x) { return 0.5 * (1.0 + std::tanh(0.1 * x)); }, 0.0, 1.0);
  EXPECT_TRUE(is_in_gamma(apply_F(k, h, p)).in_gamma);
}

TEST(JumpCorrection, IdentityAgainstQuadrature) {
  for (const auto& par : {kRef, PolyParams{4.0, 2.0, 0.7, 1.0}}) {
    const auto k = build_kernel(par);
    for (const Manufactured m : {Manufactured{0.5, 0.0}, Manufactured{0.0, 0.3}, Manufactured{-0.7, 0.4}}) {
      const Kink kink{0.0, m.d1_jump(), m.d2_jump()};
      for (double t : {-3.0, -0.4, 0.0, 0.25, 1.0, 4.0}) {
        const auto f = [&](double s) { return eval_G(k, t - s) * m.L(k, s); };
        std::vector<double> br{0.0};
        if (t != 0.0) br.push_back(t);
        std::sort(br.begin(), br.end());
        const double lhs = oracle::integrate_split(f, -12.0, 12.0, br, 1e-13);
        const double rhs = m.derivs(t)[0] + jump_correction(k, t, std::span<const Kink>(&kink, 1));
        EXPECT_NEAR(lhs, rhs, 1e-9) << "t=" << t << " kappa=" << m.kappa << " nu=" << m.nu;
      }
    }
  }
}

TEST(JumpCorrection, GridIdentityAtReferenceStep) {
  const auto k = build_kernel(kRef);
  const Manufactured m{0.5, 0.3};
  const Kink kink{0.0, m.d1_jump(), m.d2_jump()};
  const double h = 0.01;
  const auto g = Grid::make(12.0, h);
  std::vector<double> Lpsi(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    // the kink sits on a node; use the average of the one-sided values there
    Lpsi[i] = g.x(i) == 0.0 ? 0.5 * (m.L(k, -1e-300) + m.L(k, 0.0)) : m.L(k, g.x(i));
  }
  const auto conv = convolve(k, g.left(), h, Lpsi);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    if (std::abs(g.x(i)) > 4.0) continue;
    const double t = g.x(i);
    worst = std::max(worst, std::abs(conv[i] - m.derivs(t)[0] - jump_correction(k, t, std::span<const Kink>(&kink, 1))));
  }
  EXPECT_LT(worst, 5e-4);
}

TEST(JumpCorrectedF, ZeroJumpsAreBitIdentical) {
  const auto k = build_kernel(kRef);
  const auto g = Grid::make(20.0, 0.05);
  const HOperator h{1.0, Reaction::delayed_logistic(0.0)};
  const auto p = Profile::sample(g, [](double x) { return 0.5 * (1.0 + std::tanh(x)); }, 0.0, 1.0);
  const auto base = apply_F(k, h, p);
  const std::vector<Kink> zero{{0.0, 0.0, 0.0}, {3.0, 0.0, 0.0}};
  EXPECT_EQ(jump_corrected_F(k, h, p, {}).values, base.values);
  EXPECT_EQ(jump_corrected_F(k, h, p, zero).values, base.values);
  const std::vector<Kink> outside{{50.0, 1.0, 0.0}};
  try {
    jump_corrected_F(k, h, p, outside);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::KinkOutsideDomain);
  }
}

TEST(Residual, Equilibria) {
  const auto g = Grid::make(10.0, 0.01);
  const auto re = Reaction::delayed_logistic(0.1);
  EXPECT_EQ(residual(kRef, re, Profile::constant(g, 0.0)).interior_sup, 0.0);
  EXPECT_NEAR(residual(kRef, re, Profile::constant(g, 1.0)).interior_sup, 0.0, 1e-9);
  const auto rep = residual(kRef, re, Profile::constant(g, 1.0));
  EXPECT_DOUBLE_EQ(rep.band_width, 0.1);
}

TEST(Lipschitz, Constants) {
  const auto k = build_kernel(kRef);
  const HOperator h{1.0, Reaction::delayed_logistic(0.0)};
  const auto c0 = lipschitz_constants(k, h, {0.0});
  EXPECT_NEAR(c0.C_mu, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(c0.H_lip, 3.0);
  double prev = 0.0;
  for (double mu : {0.0, 0.05, 0.09, 0.099, 0.0999}) {
    const double c = lipschitz_constants(k, h, {mu}).C_mu;
    EXPECT_GT(c, prev);
    prev = c;
  }
  EXPECT_GT(prev, 100.0);
  EXPECT_THROW(lipschitz_constants(k, h, {0.1}), Error);
}

TEST(Lipschitz, EmpiricalRatioBelowBound) {
  const auto k = build_kernel(kRef);
  const auto g = Grid::make(30.0, 0.05);
  std::mt19937_64 rng(17);
  for (double r : {0.0, 0.2}) {
    const HOperator h{1.0, Reaction::delayed_logistic(r)};
    const WeightedNorm w{0.05};
    const double bound = lipschitz_constants(k, h, w).F_lip;
    for (int t = 0; t < 10; ++t) {
      const auto p = random_profile(g, rng), q = random_profile(g, rng);
      const double num = weighted_norm(difference(apply_F(k, h, p), apply_F(k, h, q)), w);
      const double den = weighted_norm(difference(p, q), w);
      EXPECT_LE(num / den, bound);
    }
  }
}

}  // namespace
