// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "manufactured.hpp"
#include "pswave/pswave.hpp"

using namespace pswave;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const PolyParams kRef{10.0, 1.0, 1.0, 1.0};

Outcome kernel_closed_form() {
  const auto k = build_kernel(kRef);
  double err = 0.0;
  const auto upd = [&](double got, double want) { err = std::max(err, std::abs(got - want)); };
  upd(k.roots.lambda1, -1.0);
  upd(k.roots.lambda2, -0.1);
  upd(k.roots.lambda3, 1.0);
  upd(k.A1, -1.0 / 18.0);
  upd(k.A2, 1.0 / 9.9);
  upd(k.A3, -1.0 / 22.0);
  const auto l = eval_G_derivs(k, 0.0, Side::left), r = eval_G_derivs(k, 0.0, Side::right);
  upd(l.G, r.G);
  upd(l.dG, r.dG);
  upd(r.d2G - l.d2G, 0.1);
  upd(kernel_total_integral(k), -1.0);
  return {err <= 1e-12, fmt("max deviation from closed forms %.2e (tol 1e-12)", err)};
}

Outcome green_identity() {
  const auto k = build_kernel(kRef);
  const double r1 = green_identity_check(k, 2.0, 0.01);
  const double r2 = green_identity_check(k, 2.0, 0.005);
  const double ratio = r1 / r2;
  return {r1 < 1e-4 && ratio >= 3.5, fmt("residual %.3e at h=0.01, halving ratio %.3f (need < 1e-4, >= 3.5)", r1, ratio)};
}

Outcome vieta_random() {
  std::mt19937_64 rng(20261019);
  std::uniform_real_distribution<double> uc(0.5, 20.0), ud(0.5, 5.0), ub(0.5, 5.0), uw(-20.0, 20.0);
  int accepted = 0, drawn = 0;
  double vieta = 0.0, re_err = 0.0;
  bool signs = true;
  while (accepted < 200) {
    ++drawn;
    const PolyParams p{uc(rng), ud(rng), ub(rng), 1.0};
    RootTriple r;
    try {
      r = solve_kernel_roots(p);
    } catch (const Error&) {
      continue;
    }
    ++accepted;
    vieta = std::max({vieta, std::abs(r.lambda1 + r.lambda2 + r.lambda3 + p.D / p.c),
                      std::abs(r.lambda1 * r.lambda2 * r.lambda3 - p.beta / p.c)});
    signs = signs && r.lambda1 < r.lambda2 && r.lambda2 < 0.0 && 0.0 < r.lambda3;
    for (int j = 0; j < 5; ++j) {
      const double w = uw(rng);
      const double got = eval_delta(p, std::complex<double>(0.0, w)).real();
      re_err = std::max(re_err, std::abs(got + p.D * w * w + p.beta) / (1.0 + p.D * w * w + p.beta));
    }
  }
  return {vieta <= 1e-10 && signs && re_err <= 1e-12,
          fmt("%d accepted of %d drawn: Vieta %.2e, sign pattern %s, Re Delta(iw) rel err %.2e", accepted, drawn,
              vieta, signs ? "ok" : "broken", re_err)};
}

Profile random_profile(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Profile p = Profile::constant(g, 0.0);
  p.right_state = 1.0;
  const double a = 0.05 + 2.0 * u(rng), x0 = -20.0 + 40.0 * u(rng), noise = 0.3 * u(rng);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double v = 0.5 * (1.0 + std::tanh(a * (g.x(i) - x0))) + noise * (u(rng) - 0.5);
    p.values[i] = std::clamp(v, 0.0, 1.0);
  }
  return p;
}

std::pair<Profile, Profile> ordered_pair(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Profile lo = random_profile(g, rng);
  Profile hi = lo;
  const double scale = u(rng);
  for (auto& v : hi.values) v = std::min(1.0, v + (1.0 - v) * scale * u(rng));
  return {lo, hi};
}

Outcome order_preservation() {
  const auto k = build_kernel(kRef);
  const auto g = Grid::make(100.0, 0.01);
  std::mt19937_64 rng(7);
  double worst_h = 0.0, worst_f = 0.0;
  for (int t = 0; t < 100; ++t) {
    const HOperator h{1.0, Reaction::delayed_logistic(t % 2 == 0 ? 0.0 : 0.15)};
    const auto [lo, hi] = ordered_pair(g, rng);
    const auto hl = apply_H(h, lo), hh = apply_H(h, hi);
    const auto fl = apply_F(k, h, lo), fh = apply_F(k, h, hi);
    for (std::size_t i = 0; i < g.n; ++i) {
      worst_h = std::max(worst_h, hl.values[i] - hh.values[i]);
      worst_f = std::max(worst_f, fl.values[i] - fh.values[i]);
    }
  }
  const HOperator h{1.0, Reaction::delayed_logistic(0.0)};
  const double fix0 = check_fixed_point(k, h, Profile::constant(g, 0.0));
  const double fixK = check_fixed_point(k, h, Profile::constant(g, 1.0));
  return {worst_h <= 1e-10 && worst_f <= 1e-10 && fix0 <= 1e-8 && fixK <= 1e-8,
          fmt("100 pairs: max order violation H %.2e, F %.2e; |F(0)-0| %.2e, |F(K)-K| %.2e", worst_h, worst_f, fix0,
              fixK)};
}

Outcome lipschitz_bound() {
  const auto k = build_kernel(kRef);
  const auto g = Grid::make(100.0, 0.01);
  std::mt19937_64 rng(11);
  const WeightedNorm w{0.05};
  double worst = 0.0, bound = 0.0;
  for (int t = 0; t < 100; ++t) {
    const HOperator h{1.0, Reaction::delayed_logistic(t % 2 == 0 ? 0.0 : 0.15)};
    bound = lipschitz_constants(k, h, w).F_lip;
    const auto p = random_profile(g, rng), q = random_profile(g, rng);
    const double ratio =
        weighted_norm(difference(apply_F(k, h, p), apply_F(k, h, q)), w) / weighted_norm(difference(p, q), w);
    worst = std::max(worst, ratio / bound);
  }
  const double c0 = weighted_abs_integral(k, 0.0);
  return {worst <= 1.0 && std::abs(c0 - 1.0) <= 1e-12,
          fmt("max ratio/bound %.4f over 100 pairs (bound %.4f at r=0.15); C_0 = %.15f", worst, bound, c0)};
}

struct PipelineRun {
  bool pass = false;
  double eta1 = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
  double min_margin = 0.0;
  double left_gap = 0.0, right_gap = 0.0;
  double super_max = 0.0, sub_min = 0.0;
  std::string failure;
  Profile profile;
};

PipelineRun pipeline(double r) {
  PipelineRun run;
  const auto g = Grid::make(100.0, 0.01);
  const auto k = build_kernel(kRef);
  try {
    const auto b = make_bounds({10.0, 1.0, r}, g);
    run.eta1 = b.pair.eta1;
    run.super_max = b.super_check.extremum;
    run.sub_min = b.sub_check.extremum;
    if (!b.pass()) {
      run.failure = "bounds";
      return run;
    }
    const HOperator h{1.0, Reaction::delayed_logistic(r)};
    const auto res =
        monotone_iterate(k, h, build_supersolution(b.super, g), build_subsolution(b.sub, g), IterationConfig{}, kRef);
    run.iterations = res.trace.records.size();
    run.min_margin = INFINITY;
    for (const auto& rec : res.trace.records) {
      run.min_margin = std::min({run.min_margin, rec.step_margin, rec.lower_margin, rec.upper_margin});
    }
    run.residual = residual(kRef, h.reaction, res.profile).interior_sup;
    const auto lc = classify_limit(res.profile, h.reaction, 1e-4);
    const auto gam = is_in_gamma(res.profile);
    run.left_gap = gam.left_gap;
    run.right_gap = gam.right_gap;
    run.pass = res.trace.converged && run.min_margin >= -1e-8 && run.residual < 1e-3 &&
               lc.kind == LimitKind::connects_0_to_K && run.left_gap < 1e-4 && run.right_gap < 1e-4;
    if (!run.pass) run.failure = limit_kind_name(lc.kind);
    run.profile = res.profile;
  } catch (const Error& e) {
    run.failure = error_name(e.code());
  }
  return run;
}

Profile reference_profile;

Outcome end_to_end() {
  const auto run = pipeline(0.0);
  reference_profile = run.profile;
  return {run.pass,
          fmt("super max %.2e, sub min %.2e; %zu iterations, min chain margin %.2e, residual %.2e, gaps %.2e / %.2e%s",
              run.super_max, run.sub_min, run.iterations, run.min_margin, run.residual, run.left_gap, run.right_gap,
              run.failure.empty() ? "" : (" [" + run.failure + "]").c_str())};
}

Outcome delay_continuation() {
  const auto g = Grid::make(100.0, 0.01);
  const auto scan = find_max_delay(10.0, 1.0, g);
  std::vector<double> rs;
  const int steps = 20;
  for (int j = 0; j <= steps; ++j) rs.push_back(scan.r_star * j / steps);
  bool all = scan.r_star > 0.0 && scan.nonmonotone.empty();
  double worst_jump = 0.0;
  double prev_eta = 0.0, prev_r = 0.0;
  std::string failed;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const auto run = pipeline(rs[i]);
    if (!run.pass) {
      all = false;
      failed += fmt(" r=%.4f(%s)", rs[i], run.failure.c_str());
    }
    if (i > 0) worst_jump = std::max(worst_jump, std::abs(run.eta1 - prev_eta) / (10.0 * (rs[i] - prev_r)));
    prev_eta = run.eta1;
    prev_r = rs[i];
  }
  all = all && worst_jump < 1.0;
  return {all, fmt("r_star %.4f (first failure %.4f), %zu delays in [0, r_star] pass%s; max eta1 gap / (10 dr) %.3f",
                   scan.r_star, scan.r_fail, rs.size(), failed.empty() ? "" : (", failed:" + failed).c_str(),
                   worst_jump)};
}

Outcome pde_cross_validation() {
  if (reference_profile.values.empty()) return {false, "no converged profile from the end-to-end run"};
  SchemeConfig sc;  // dt 1e-3, dx 0.01, T 20, X 200
  sc.tau = 0.0;
  ValidationOptions opt;
  opt.shift = sc.X - reference_profile.grid.half_width;
  auto phi = reference_profile;
  phi.left_tail_rate = solve_delayed_positive_roots({10.0, 1.0, 0.0}).eta1;
  const auto rep = run_validation(phi, 10.0, sc, opt);
  const auto probe =
      comparison_probe(seed_from_profile(phi, 10.0, sc, opt.shift + 1.0), seed_from_profile(phi, 10.0, sc, opt.shift), sc);
  // negative control: the same run judged against half the speed must fail
  const auto neg = evolve_and_measure(seed_from_profile(phi, 10.0, sc, opt.shift), 5.0, sc, opt);
  return {rep.pass && probe.ordered && !neg.pass,
          fmt("c_est %.5f (err %.3f%%), drift %.2e; comparison min gap %.2e over %zu samples; control at c/2 %s",
              rep.speed.c_est, 100.0 * rep.speed_error, rep.speed.shape_drift, probe.min_gap, probe.samples,
              neg.pass ? "passed (bad)" : "rejected")};
}

Outcome jump_identity() {
  const auto k = build_kernel(kRef);
  const Manufactured m{0.5, 0.3};
  const Kink kink{0.0, m.d1_jump(), m.d2_jump()};
  const double h = 0.01;
  const auto g = Grid::make(12.0, h);
  std::vector<double> Lpsi(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    Lpsi[i] = g.x(i) == 0.0 ? 0.5 * (m.L(k, -1e-300) + m.L(k, 0.0)) : m.L(k, g.x(i));
  }
  const auto conv = convolve(k, g.left(), h, Lpsi);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    const double t = g.x(i);
    if (std::abs(t) > 4.0) continue;
    worst = std::max(worst, std::abs(conv[i] - m.derivs(t)[0] - jump_correction(k, t, std::span<const Kink>(&kink, 1))));
  }
  // zero jumps: bit-identical to apply_F
  const auto pg = Grid::make(50.0, h);
  const HOperator hop{1.0, Reaction::delayed_logistic(0.1)};
  const auto p = Profile::sample(pg, [](double x) { return 0.5 * (1.0 + std::tanh(0.3 * x)); }, 0.0, 1.0);
  const std::vector<Kink> zero{{0.0, 0.0, 0.0}, {-7.5, 0.0, 0.0}};
  const bool same = jump_corrected_F(k, hop, p, zero).values == apply_F(k, hop, p).values &&
                    jump_corrected_F(k, hop, p, {}).values == apply_F(k, hop, p).values;
  return {worst <= 5e-4 && same,
          fmt("identity residual %.2e at h=0.01 (tol 5e-4); zero-jump output %s", worst,
              same ? "bit-identical" : "differs")};
}

struct Criterion {
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"kernel closed forms at (10,1,1)", 1e-3, kernel_closed_form},
      {"Green identity, second order", 1.0, green_identity},
      {"random root properties", 1.0, vieta_random},
      {"order preservation of H and F", 30.0, order_preservation},
      {"weighted Lipschitz bound", 30.0, lipschitz_bound},
      {"end-to-end solve at r=0", 120.0, end_to_end},
      {"delay continuation", 300.0, delay_continuation},
      {"PDE cross-validation", 600.0, pde_cross_validation},
      {"jump-correction identity", 10.0, jump_identity},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("AC%zu %s  %s: %s  [%.3g s, limit %g s%s]\n", i + 1, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                secs, c.limit_s, in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
