#pragma once

// Run configuration: one JSON document, defaults in a single table.

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pswave/charpoly.hpp"
#include "pswave/error.hpp"
#include "pswave/iterate.hpp"
#include "pswave/pdecheck.hpp"

namespace pswave {

using Json = nlohmann::ordered_json;

inline constexpr int kConfigVersion = 1;

struct GridConfig {
  double L = 100.0;
  double h = 0.01;
};

struct IterationSettings {
  double tol_fixed = 1e-8;
  double tol_residual = 1e-3;
  int max_iter = 500;
};

struct PdeSettings {
  double dt = 1e-3;
  double dx = 0.01;
  double T = 20.0;
  double X = 200.0;
};

struct RunConfig {
  double c = 10.0;
  double D = 1.0;
  double beta = 1.0;
  double alpha = 1.0;
  double tau = 0.0;
  double K = 1.0;
  double mu = 0.05;
  GridConfig grid;
  IterationSettings iteration;
  PdeSettings pde;
  std::uint64_t seed = 0;

  /// Profile-space delay r = c tau.
  double r() const { return c * tau; }
  PolyParams poly() const { return {c, D, beta, alpha}; }
  DelayedCharParams delayed() const { return {c, D, r()}; }
  Grid make_grid() const { return Grid::make(grid.L, grid.h); }

  IterationConfig iteration_config() const {
    IterationConfig ic;
    ic.tol_fixed = iteration.tol_fixed;
    ic.tol_residual = iteration.tol_residual;
    ic.max_iter = iteration.max_iter;
    ic.mu = mu;
    return ic;
  }

  SchemeConfig scheme() const { return {pde.dt, pde.dx, pde.T, D, alpha, tau, pde.X, K}; }

  /// Downstream positivity constraints plus mu < mu0 of the kernel roots.
  void validate() const {
    poly().validate();
    require(tau >= 0.0 && std::isfinite(tau), ErrorCode::InvalidParameter, "tau must be >= 0");
    require(K == 1.0, ErrorCode::InvalidParameter, "the delayed logistic application fixes K = 1");
    require(mu > 0.0, ErrorCode::InvalidParameter, "mu must be > 0");
    Grid::make(grid.L, grid.h);
    iteration_config().validate();
    const auto roots = solve_kernel_roots(poly());
    if (!(mu < spectral_gap_mu0(roots))) fail(ErrorCode::MuTooLarge, "mu must stay below mu0");
  }
};

namespace detail {

inline void read_field(const Json& j, const char* key, double& out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number()) fail(ErrorCode::ConfigError, std::string("'") + key + "' must be a number");
  out = j.at(key).get<double>();
}

inline void read_field(const Json& j, const char* key, int& out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number_integer()) fail(ErrorCode::ConfigError, std::string("'") + key + "' must be an integer");
  out = j.at(key).get<int>();
}

inline void read_field(const Json& j, const char* key, std::uint64_t& out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number_unsigned()) {
    fail(ErrorCode::ConfigError, std::string("'") + key + "' must be a non-negative integer");
  }
  out = j.at(key).get<std::uint64_t>();
}

inline void reject_unknown(const Json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) fail(ErrorCode::ConfigError, where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(ErrorCode::ConfigError, "unknown key '" + key + "' in " + where);
  }
}

}  // namespace detail

inline Json to_json(const RunConfig& c) {
  return Json{{"version", kConfigVersion},
              {"c", c.c},
              {"D", c.D},
              {"beta", c.beta},
              {"alpha", c.alpha},
              {"tau", c.tau},
              {"K", c.K},
              {"mu", c.mu},
              {"grid", {{"L", c.grid.L}, {"h", c.grid.h}}},
              {"iteration",
               {{"tol_fixed", c.iteration.tol_fixed},
                {"tol_residual", c.iteration.tol_residual},
                {"max_iter", c.iteration.max_iter}}},
              {"pde", {{"dt", c.pde.dt}, {"dx", c.pde.dx}, {"T", c.pde.T}, {"X", c.pde.X}}},
              {"seed", c.seed}};
}

/// Missing keys keep their defaults; unknown keys are an error.
inline RunConfig config_from_json(const Json& j) {
  using detail::read_field;
  detail::reject_unknown(j, {"version", "c", "D", "beta", "alpha", "tau", "K", "mu", "grid", "iteration", "pde", "seed"},
                         "config");
  RunConfig c;
  if (j.contains("version")) {
    int v = 0;
    read_field(j, "version", v);
    require(v == kConfigVersion, ErrorCode::ConfigError, "unsupported config version " + std::to_string(v));
  }
  read_field(j, "c", c.c);
  read_field(j, "D", c.D);
  read_field(j, "beta", c.beta);
  read_field(j, "alpha", c.alpha);
  read_field(j, "tau", c.tau);
  read_field(j, "K", c.K);
  read_field(j, "mu", c.mu);
  read_field(j, "seed", c.seed);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    detail::reject_unknown(g, {"L", "h"}, "grid");
    read_field(g, "L", c.grid.L);
    read_field(g, "h", c.grid.h);
  }
  if (j.contains("iteration")) {
    const auto& it = j.at("iteration");
    detail::reject_unknown(it, {"tol_fixed", "tol_residual", "max_iter"}, "iteration");
    read_field(it, "tol_fixed", c.iteration.tol_fixed);
    read_field(it, "tol_residual", c.iteration.tol_residual);
    read_field(it, "max_iter", c.iteration.max_iter);
  }
  if (j.contains("pde")) {
    const auto& p = j.at("pde");
    detail::reject_unknown(p, {"dt", "dx", "T", "X"}, "pde");
    read_field(p, "dt", c.pde.dt);
    read_field(p, "dx", c.pde.dx);
    read_field(p, "T", c.pde.T);
    read_field(p, "X", c.pde.X);
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  require(static_cast<bool>(f), ErrorCode::IoError, "cannot open config " + path);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ConfigError, std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

/// Metadata written next to a profile CSV: grid, asymptotic states and norms.
inline Json profile_sidecar(const Profile& p, double mu) {
  return Json{{"grid", {{"L", p.grid.half_width}, {"h", p.grid.h}, {"n", p.grid.n}}},
              {"left_state", p.left_state},
              {"right_state", p.right_state},
              {"left_tail_rate", p.left_tail_rate},
              {"sup_norm", sup_norm(p)},
              {"weighted_norm", {{"mu", mu}, {"value", weighted_norm(p, {mu})}}}};
}

}  // namespace pswave
