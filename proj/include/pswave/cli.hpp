#pragma once

// Command implementations behind the `pswave` tool. Each command fills a JSON report
// as it goes so a failure still leaves the partial report for the caller to print.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "pswave/bounds.hpp"
#include "pswave/charpoly.hpp"
#include "pswave/config.hpp"
#include "pswave/error.hpp"
#include "pswave/funcspace.hpp"
#include "pswave/greenkernel.hpp"
#include "pswave/iterate.hpp"
#include "pswave/pdecheck.hpp"
#include "pswave/svg.hpp"
#include "pswave/waveop.hpp"

namespace pswave::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;

/// One exit code per error condition; 2 and 3 are the root-structure failures.
inline int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::DistinctRealRootsRequired: return 2;
    case ErrorCode::NoPositivePair: return 3;
    case ErrorCode::InvalidParameter: return 4;
    case ErrorCode::InvalidEpsilon: return 5;
    case ErrorCode::InvalidPlateau: return 6;
    case ErrorCode::BaseCaseFails: return 7;
    case ErrorCode::BoundsViolated: return 8;
    case ErrorCode::GridMismatch: return 9;
    case ErrorCode::GridTooSmall: return 10;
    case ErrorCode::RangeViolation: return 11;
    case ErrorCode::KinkOutsideDomain: return 12;
    case ErrorCode::MuTooLarge: return 13;
    case ErrorCode::PreconditionFailed: return 14;
    case ErrorCode::OrderingViolated: return 15;
    case ErrorCode::MaxIterExceeded: return 16;
    case ErrorCode::DomainTooSmall: return 17;
    case ErrorCode::NonMonotoneFront: return 18;
    case ErrorCode::SingularSystem: return 19;
    case ErrorCode::IoError: return 20;
    case ErrorCode::ConfigError: return 21;
    case ErrorCode::ValidationFailed: return 22;
  }
  return 99;
}

inline const std::vector<ErrorCode>& all_error_codes() {
  static const std::vector<ErrorCode> codes{
      ErrorCode::InvalidParameter,  ErrorCode::DistinctRealRootsRequired,
      ErrorCode::NoPositivePair,    ErrorCode::InvalidEpsilon,
      ErrorCode::InvalidPlateau,    ErrorCode::BaseCaseFails,
      ErrorCode::BoundsViolated,    ErrorCode::GridMismatch,
      ErrorCode::GridTooSmall,      ErrorCode::RangeViolation,
      ErrorCode::KinkOutsideDomain, ErrorCode::MuTooLarge,
      ErrorCode::PreconditionFailed, ErrorCode::OrderingViolated,
      ErrorCode::MaxIterExceeded,   ErrorCode::DomainTooSmall,
      ErrorCode::NonMonotoneFront,  ErrorCode::SingularSystem,
      ErrorCode::IoError,           ErrorCode::ConfigError,
      ErrorCode::ValidationFailed};
  return codes;
}

struct Output {
  std::optional<std::filesystem::path> dir;

  void write(const std::string& name, const std::string& text) const {
    if (!dir) return;
    std::error_code ec;
    std::filesystem::create_directories(*dir, ec);
    require(!ec, ErrorCode::IoError, "cannot create " + dir->string());
    write_text_file((*dir / name).string(), text);
  }
};

// ---------------------------------------------------------------------------

inline Json roots_json(const RootTriple& r) { return Json{r.lambda1, r.lambda2, r.lambda3}; }

inline Json kernel_roots_report(const PolyParams& p, const RootTriple& r) {
  const double scale = std::max({1.0, p.c, p.D, p.beta});
  Json j;
  j["roots"] = roots_json(r);
  j["vieta_sum_residual"] = std::abs(r.lambda1 + r.lambda2 + r.lambda3 + p.D / p.c);
  j["vieta_product_residual"] = std::abs(r.lambda1 * r.lambda2 * r.lambda3 - p.beta / p.c);
  double worst = 0.0;
  for (double l : r.as_array()) worst = std::max(worst, std::abs(eval_delta(p, l)) / scale);
  j["max_scaled_delta_residual"] = worst;
  j["mu0"] = spectral_gap_mu0(r);
  return j;
}

/// Kernel roots, Vieta residuals, mu0 and the status of the delayed positive pair.
inline void cmd_roots(const RunConfig& cfg, Json& report) {
  const PolyParams p = cfg.poly();
  p.validate();
  report["params"] = {{"c", p.c}, {"D", p.D}, {"beta", p.beta}, {"alpha", p.alpha}, {"r", cfg.r()}};
  const auto roots = solve_kernel_roots(p);
  report["kernel"] = kernel_roots_report(p, roots);
  report["positive_pair"] = {{"status", "pending"}};
  const auto dp = cfg.delayed();
  try {
    const auto pair = solve_delayed_positive_roots(dp);
    report["positive_pair"] = {{"status", "ok"},
                               {"eta1", pair.eta1},
                               {"eta2", pair.eta2},
                               {"delta_r_eta1", eval_delta_r(dp, pair.eta1)},
                               {"delta_r_eta2", eval_delta_r(dp, pair.eta2)}};
  } catch (const Error& e) {
    report["positive_pair"] = {{"status", std::string(error_name(e.code()))}};
    throw;
  }
}

/// Closed-form kernel report: coefficients, continuity of G and G', the jump of G'',
/// the total integral and a numerical Green-identity check.
inline void cmd_kernel(const RunConfig& cfg, const Output& out, Json& report) {
  cfg.validate();
  const PolyParams p = cfg.poly();
  const auto k = build_kernel(p);
  report["kernel"] = kernel_roots_report(p, k.roots);
  report["coefficients"] = {{"A1", k.A1}, {"A2", k.A2}, {"A3", k.A3}};
  const auto l = eval_G_derivs(k, 0.0, Side::left);
  const auto r = eval_G_derivs(k, 0.0, Side::right);
  report["continuity"] = {{"G_jump", std::abs(r.G - l.G)},
                          {"dG_jump", std::abs(r.dG - l.dG)},
                          {"d2G_jump", r.d2G - l.d2G},
                          {"d2G_jump_residual", std::abs(r.d2G - l.d2G - 1.0 / (p.alpha * p.c))}};
  const double total = kernel_total_integral(k);
  report["total_integral"] = total;
  report["total_integral_residual"] = std::abs(total + 1.0 / p.beta);
  report["decay_rate"] = k.decay_rate;
  report["C_mu"] = {{"mu", cfg.mu}, {"value", weighted_abs_integral(k, cfg.mu)}};
  report["green_identity"] = {{"width", 1.0}, {"h", cfg.grid.h}, {"residual", green_identity_check(k, 1.0, cfg.grid.h)}};
  std::string csv = "xi,G,dG,d2G\n";
  for (int i = -2000; i <= 2000; ++i) {
    const double xi = 0.01 * i;
    const auto d = eval_G_derivs(k, xi);
    csv += format_double(xi) + ',' + format_double(d.G) + ',' + format_double(d.dG) + ',' + format_double(d.d2G) + '\n';
  }
  out.write("kernel.csv", csv);
}

inline Json bounds_check_json(const BoundsCheck& bc) {
  Json cases = Json::array();
  for (const auto& ce : bc.cases) {
    cases.push_back(ce.present ? Json{{"points", ce.points}, {"extremum", ce.value}}
                               : Json{{"points", 0}, {"extremum", nullptr}});
  }
  return Json{{"pass", bc.pass}, {"extremum", bc.extremum}, {"cases", cases}};
}

inline Json bounds_json(const BoundsSetup& b) {
  return Json{{"eta1", b.pair.eta1},
              {"eta2", b.pair.eta2},
              {"super", {{"eta1", b.super.eta1}, {"check", bounds_check_json(b.super_check)}}},
              {"sub",
               {{"eps", b.sub.eps},
                {"q", b.sub.q},
                {"xi1", b.sub.xi1},
                {"d1", b.sub.d1},
                {"check", bounds_check_json(b.sub_check)}}},
              {"pass", b.pass()}};
}

inline void require_bounds_pass(const BoundsSetup& b) {
  if (b.pass()) return;
  std::string msg = "bounds fail at r = " + format_double(b.params.r) + ":";
  if (!b.super_check.pass) msg += " supersolution max LHS " + format_double(b.super_check.extremum);
  if (!b.sub_check.pass) msg += " subsolution min LHS " + format_double(b.sub_check.extremum);
  fail(ErrorCode::BoundsViolated, msg);
}

/// Super/sub-solution certification at r = c tau; optionally the delay scan.
inline void cmd_verify(const RunConfig& cfg, Json& report, bool scan) {
  cfg.validate();
  const Grid g = cfg.make_grid();
  report["r"] = cfg.r();
  const auto b = make_bounds(cfg.delayed(), g);
  report["bounds"] = bounds_json(b);
  if (scan) {
    const auto s = find_max_delay(cfg.c, cfg.D, g);
    Json probes = Json::array();
    for (const auto& pr : s.probes) {
      probes.push_back({{"r", pr.r}, {"pass", pr.pass}, {"eta1", pr.eta1}, {"failure", pr.failure}});
    }
    report["scan"] = {{"r_star", s.r_star},
                      {"r_fail", std::isfinite(s.r_fail) ? Json(s.r_fail) : Json(nullptr)},
                      {"nonmonotone", s.nonmonotone},
                      {"probes", probes}};
  }
  require_bounds_pass(b);
}

inline std::string trace_to_csv(const IterationTrace& t) {
  std::string out = "iter,sup_gap,weighted_gap,lower_margin,upper_margin,step_margin,residual,in_gamma\n";
  for (const auto& r : t.records) {
    out += std::to_string(r.iter) + ',' + format_double(r.sup_gap) + ',' + format_double(r.weighted_gap) + ',' +
           format_double(r.lower_margin) + ',' + format_double(r.upper_margin) + ',' + format_double(r.step_margin) +
           ',' + format_double(r.residual) + ',' + (r.in_gamma ? "1" : "0") + '\n';
  }
  return out;
}

/// Pointwise |c phi''' + D phi'' - c phi' + f| for plotting.
inline std::vector<double> pointwise_residual(const PolyParams& p, const Reaction& re, const Profile& phi) {
  const Profile d1 = finite_diff(phi, 1), d2 = finite_diff(phi, 2), d3 = finite_diff(phi, 3);
  std::vector<double> out(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double f = apply_reaction(re, phi.values[i], sample_at(phi, phi.grid.x(i) - re.delay));
    out[i] = std::abs(p.alpha * p.c * d3.values[i] + p.D * d2.values[i] - p.c * d1.values[i] + f);
  }
  return out;
}

inline std::string solve_plot(const Profile& phi, const Profile& upper, const std::optional<Profile>& lower,
                              const std::vector<double>& res) {
  const std::size_t stride = std::max<std::size_t>(1, phi.size() / 1000);
  const auto pick = [&](const std::vector<double>& v, bool log) {
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); i += stride) out.push_back(log ? std::log10(std::max(v[i], 1e-16)) : v[i]);
    return out;
  };
  std::vector<double> xs;
  for (std::size_t i = 0; i < phi.size(); i += stride) xs.push_back(phi.grid.x(i));
  svg::Panel top{"profile and envelopes", "phi", {}};
  top.series.push_back({"super", "#d62728", xs, pick(upper.values, false)});
  if (lower) top.series.push_back({"sub", "#1f77b4", xs, pick(lower->values, false)});
  top.series.push_back({"profile", "black", xs, pick(phi.values, false)});
  svg::Panel bottom{"residual of the profile equation", "log10 |residual|", {}};
  bottom.series.push_back({"residual", "#2ca02c", xs, pick(res, true)});
  return svg::render({top, bottom});
}

struct SolveOptions {
  bool skip_bounds = false;
};

/// Full pipeline: roots, kernel, bounds, monotone iteration, classification.
/// Writes profile.csv, trace.csv, summary.json and plot.svg.
inline void cmd_solve(const RunConfig& cfg, const Output& out, Json& report, SolveOptions opt = {}) {
  cfg.validate();
  report["config"] = to_json(cfg);
  const PolyParams p = cfg.poly();
  const Grid g = cfg.make_grid();
  const auto k = build_kernel(p);
  report["kernel"] = kernel_roots_report(p, k.roots);
  report["kernel"]["coefficients"] = {{"A1", k.A1}, {"A2", k.A2}, {"A3", k.A3}};
  report["bounds_waived"] = opt.skip_bounds;

  const auto dp = cfg.delayed();
  Profile upper;
  std::optional<Profile> lower;
  if (!opt.skip_bounds) {
    const auto b = make_bounds(dp, g);
    report["bounds"] = bounds_json(b);
    require_bounds_pass(b);
    upper = build_supersolution(b.super, g);
    lower = build_subsolution(b.sub, g);
  } else {
    const auto pair = solve_delayed_positive_roots(dp);
    report["bounds"] = {{"eta1", pair.eta1}, {"eta2", pair.eta2}, {"checked", false}};
    upper = build_supersolution({pair.eta1}, g);
    try {
      lower = build_subsolution(default_sub_params(pair, dp), g);
    } catch (const Error&) {
      lower.reset();
    }
  }

  const HOperator h{cfg.beta, Reaction::delayed_logistic(cfg.r(), cfg.K)};
  report["quasimonotone"] = check_quasimonotone(h, 10000, cfg.seed);
  report["lipschitz"] = [&] {
    const auto lc = lipschitz_constants(k, h, {cfg.mu});
    return Json{{"C_mu", lc.C_mu}, {"H_lip", lc.H_lip}, {"F_lip", lc.F_lip}};
  }();

  auto ic = cfg.iteration_config();
  ic.waive_bounds = opt.skip_bounds;
  const Profile floor = lower ? *lower : [&] {
    Profile z = Profile::constant(g, 0.0);
    z.left_tail_rate = upper.left_tail_rate;
    return z;
  }();
  IterationResult res;
  try {
    res = monotone_iterate(k, h, upper, floor, ic, p);
  } catch (const IterationError& e) {
    out.write("trace.csv", trace_to_csv(e.trace()));
    report["iteration"] = {{"converged", false}, {"iterations", e.trace().records.size()}};
    throw;
  }
  const auto& last = res.trace.records.back();
  const auto rr = residual(p, h.reaction, res.profile);
  report["iteration"] = {{"converged", res.trace.converged},
                         {"iterations", res.trace.records.size()},
                         {"final_sup_gap", last.sup_gap},
                         {"final_weighted_gap", last.weighted_gap},
                         {"min_lower_margin", last.lower_margin},
                         {"residual", rr.interior_sup},
                         {"residual_band", rr.band_sup},
                         {"residual_ok", rr.interior_sup <= ic.tol_residual}};
  const auto lc = classify_limit(res.profile, h.reaction, 1e-4);
  const auto gam = is_in_gamma(res.profile, cfg.K);
  report["classification"] = {{"kind", limit_kind_name(lc.kind)},
                              {"plateau", lc.k},
                              {"f_at_plateau", lc.f_at_k},
                              {"left_gap", gam.left_gap},
                              {"right_gap", gam.right_gap},
                              {"in_gamma", gam.in_gamma}};

  out.write("profile.csv", profile_to_csv(res.profile));
  out.write("profile.json", dump_json(profile_sidecar(res.profile, cfg.mu)));
  out.write("trace.csv", trace_to_csv(res.trace));
  out.write("plot.svg", solve_plot(res.profile, upper, lower, pointwise_residual(p, h.reaction, res.profile)));
  out.write("summary.json", dump_json(report));
  if (!(rr.interior_sup <= ic.tol_residual)) {
    fail(ErrorCode::ValidationFailed, "converged residual " + format_double(rr.interior_sup) + " above tolerance");
  }
}

struct EvolveOptions {
  std::string profile_path;
  bool compare = false;
};

/// PDE cross-check of a profile CSV at the configured speed and delay.
inline void cmd_evolve(const RunConfig& cfg, const Output& out, Json& report, const EvolveOptions& opt) {
  const SchemeConfig sc = cfg.scheme();
  sc.validate();
  std::ifstream f(opt.profile_path);
  require(static_cast<bool>(f), ErrorCode::IoError, "cannot open profile " + opt.profile_path);
  Profile phi = profile_from_csv(f, 0.0, cfg.K);
  report["scheme"] = {{"dt", sc.dt}, {"dx", sc.dx}, {"T", sc.T}, {"X", sc.X}, {"tau", sc.tau}, {"D", sc.D},
                      {"alpha", sc.alpha}};
  // the leading edge decays like e^{eta1 xi}; use it beyond the profile's left end
  try {
    phi.left_tail_rate = solve_delayed_positive_roots(cfg.delayed()).eta1;
  } catch (const Error&) {
    phi.left_tail_rate = 0.0;
  }
  report["left_tail_rate"] = phi.left_tail_rate;
  ValidationOptions vo;
  vo.shift = sc.X - phi.grid.half_width;
  report["shift"] = vo.shift;
  const auto rep = run_validation(phi, cfg.c, sc, vo);
  report["verdict"] = rep.verdict;
  report["c"] = cfg.c;
  report["c_est"] = rep.speed.degenerate ? Json(nullptr) : Json(rep.speed.c_est);
  report["speed_error"] = rep.speed.degenerate ? Json(nullptr) : Json(rep.speed_error);
  report["shape_drift"] = rep.speed.shape_drift;
  report["value_range"] = {rep.min_value, rep.max_value};
  if (opt.compare) {
    const auto lo = seed_from_profile(phi, cfg.c, sc, vo.shift + 1.0);
    const auto hi = seed_from_profile(phi, cfg.c, sc, vo.shift);
    const auto cp = comparison_probe(lo, hi, sc);
    report["comparison"] = {{"ordered", cp.ordered}, {"min_gap", cp.min_gap}, {"samples", cp.samples}};
  }
  std::string csv = "t,xi_half\n";
  for (std::size_t i = 0; i < rep.speed.times.size(); ++i) {
    csv += format_double(rep.speed.times[i]) + ',' + format_double(rep.speed.positions[i]) + '\n';
  }
  out.write("front.csv", csv);
  out.write("verdict.json", dump_json(report));
  if (!rep.pass) fail(ErrorCode::ValidationFailed, "PDE validation verdict: " + rep.verdict);
}

}  // namespace pswave::cli
