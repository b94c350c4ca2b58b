#include "bardina/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bardina/errors.hpp"

namespace bardina {

Forcing zero_forcing(const BasisPlan& plan) {
  return Forcing{plan.make_coeffs(), HarmonicVector{std::vector<double>(plan.harmonic_dim(), 0.0)}};
}

void validate_params(const BasisPlan& plan, const ModelParams& params) {
  if (!(params.nu > 0.0) || !std::isfinite(params.nu)) throw ConfigError("nu must be positive");
  if (!(params.alpha > 0.0) || !std::isfinite(params.alpha)) throw ConfigError("alpha must be positive");
  if (!(params.sigma >= 0.0) || !std::isfinite(params.sigma)) throw ConfigError("sigma must be non-negative");
  if (plan.geometry().is_torus() && params.sigma == 0.0)
    throw ConfigError("sigma must be positive on the torus");
  if (params.forcing.f1_curl.size() != plan.mode_count())
    throw ConfigError("forcing f1 has " + std::to_string(params.forcing.f1_curl.size()) +
                      " coefficients, expected " + std::to_string(plan.mode_count()));
  if (params.forcing.f2.size() != plan.harmonic_dim())
    throw ConfigError("forcing f2 has the wrong dimension for this geometry");
}

namespace {

void add_scaled_product(GridField& gx, GridField& gy, const GridField& zeta, const VectorGridField& w) {
  // g += zeta * rot90(w), rot90(a, b) = (-b, a)
  for (std::size_t q = 0; q < zeta.values.size(); ++q) {
    gx.values[q] -= zeta.values[q] * w.e2.values[q];
    gy.values[q] += zeta.values[q] * w.e1.values[q];
  }
}

NonlinearSplit split(const BasisPlan& plan, const VectorGridField& g) {
  return NonlinearSplit{leray_project(plan, g), harmonic_project(plan, g)};
}

// Shared assembly: du = (forcing - N - sigma psi) / (1 + a^2 lambda) [- nu lambda psi]
VelocityState assemble(const BasisPlan& plan, const VelocityState& state, const NonlinearSplit& n,
                       const ModelParams& params, const Forcing* forcing, bool include_stiff) {
  VelocityState out = state;
  const auto lam = plan.eigenvalues();
  const double a2 = params.alpha * params.alpha;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const double psi = state.psi[i];
    double num = -n.p_part[i] - params.sigma * psi;
    if (forcing) num += forcing->f1_curl[i];
    double d = num / (1.0 + a2 * lam[i]);
    if (include_stiff) d -= params.nu * lam[i] * psi;
    out.psi[i] = d;
  }
  for (std::size_t j = 0; j < out.harmonic.size(); ++j) {
    double d = -params.sigma * state.harmonic.values[j] - n.q_part.values[j];
    if (forcing) d += forcing->f2.values[j];
    out.harmonic.values[j] = d;
  }
  return out;
}

}  // namespace

BackgroundFields background_fields(const BasisPlan& plan, const VelocityState& u) {
  return BackgroundFields{velocity_grid(plan, u), synthesize(plan, scalar_vorticity(plan, u))};
}

NonlinearSplit nonlinear_term(const BasisPlan& plan, const BackgroundFields& bg) {
  VectorGridField g{plan.make_grid(), plan.make_grid()};
  add_scaled_product(g.e1, g.e2, bg.vorticity, bg.velocity);
  return split(plan, g);
}

NonlinearSplit nonlinear_term(const BasisPlan& plan, const VelocityState& u) {
  return nonlinear_term(plan, background_fields(plan, u));
}

namespace {

NonlinearSplit tangent_split(const BasisPlan& plan, const BackgroundFields& bg, const TangentState& U) {
  const auto vel_U = velocity_grid(plan, U);
  const auto zeta_U = synthesize(plan, scalar_vorticity(plan, U));
  VectorGridField g{plan.make_grid(), plan.make_grid()};
  add_scaled_product(g.e1, g.e2, zeta_U, bg.velocity);
  add_scaled_product(g.e1, g.e2, bg.vorticity, vel_U);
  return split(plan, g);
}

}  // namespace

NonlinearSplit tangent_nonlinear_term(const BasisPlan& plan, const VelocityState& u,
                                      const TangentState& U) {
  return tangent_split(plan, background_fields(plan, u), U);
}

VelocityState rhs_u(const BasisPlan& plan, const VelocityState& state, const ModelParams& params) {
  return assemble(plan, state, nonlinear_term(plan, state), params, &params.forcing, true);
}

VelocityState rhs_u_nonstiff(const BasisPlan& plan, const VelocityState& state,
                             const ModelParams& params) {
  return assemble(plan, state, nonlinear_term(plan, state), params, &params.forcing, false);
}

VelocityState rhs_u_nonstiff(const BasisPlan& plan, const VelocityState& state,
                             const BackgroundFields& background, const ModelParams& params) {
  return assemble(plan, state, nonlinear_term(plan, background), params, &params.forcing, false);
}

TangentState rhs_tangent_nonstiff(const BasisPlan& plan, const TangentState& U,
                                  const BackgroundFields& background, const ModelParams& params) {
  return assemble(plan, U, tangent_split(plan, background, U), params, nullptr, false);
}

TangentState rhs_tangent(const BasisPlan& plan, const TangentState& U, const VelocityState& u,
                         const ModelParams& params) {
  return assemble(plan, U, tangent_nonlinear_term(plan, u, U), params, nullptr, true);
}

TangentState rhs_tangent_nonstiff(const BasisPlan& plan, const TangentState& U,
                                  const VelocityState& u, const ModelParams& params) {
  return assemble(plan, U, tangent_nonlinear_term(plan, u, U), params, nullptr, false);
}

double cutoff_theta(double s, double rho) {
  if (!(rho > 0.0)) throw ConfigError("cutoff radius must be positive");
  const double x = s / rho;
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double t = x - 1.0;
  return 1.0 - 3.0 * t * t + 2.0 * t * t * t;
}

namespace {

VelocityState prepared(const BasisPlan& plan, const VelocityState& v, const ModelParams& params,
                       double rho, bool include_stiff) {
  if (!plan.geometry().is_sphere())
    throw UnsupportedGeometryError("the prepared equation is only defined on the sphere");
  check_state(plan, v);
  const auto u = helmholtz_unfilter(plan, v, params.alpha);
  const double theta = cutoff_theta(norm_l2(plan, v), rho);
  const auto lam = plan.eigenvalues();
  VelocityState out = v;
  NonlinearSplit n;
  if (theta > 0.0) n = nonlinear_term(plan, u);
  for (std::size_t i = 0; i < lam.size(); ++i) {
    double d = -params.sigma * u.psi[i];
    if (theta > 0.0) d -= theta * (n.p_part[i] - params.forcing.f1_curl[i]);
    if (include_stiff) d -= params.nu * lam[i] * v.psi[i];
    out.psi[i] = d;
  }
  return out;
}

}  // namespace

VelocityState prepared_rhs(const BasisPlan& plan, const VelocityState& v, const ModelParams& params,
                           double rho) {
  return prepared(plan, v, params, rho, true);
}

VelocityState prepared_rhs_nonstiff(const BasisPlan& plan, const VelocityState& v,
                                    const ModelParams& params, double rho) {
  return prepared(plan, v, params, rho, false);
}

VelocityState rhs_v(const BasisPlan& plan, const VelocityState& v, const ModelParams& params) {
  const auto u = helmholtz_unfilter(plan, v, params.alpha);
  return helmholtz_filter(plan, rhs_u(plan, u, params), params.alpha);
}

ForcingNorms forcing_norms(const BasisPlan& plan, const Forcing& forcing) {
  check_shape(plan, forcing.f1_curl);
  const auto lam = plan.eigenvalues();
  ForcingNorms n;
  double s1 = 0.0, s_half = 0.0, s_inv = 0.0;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const double c2 = forcing.f1_curl[i] * forcing.f1_curl[i];
    s1 += lam[i] * c2;
    s_half += c2;
    s_inv += c2 / lam[i];
  }
  double h2 = 0.0;
  for (double h : forcing.f2.values) h2 += h * h;
  h2 *= plan.area();
  n.f1 = std::sqrt(s1);
  n.f1_inv_half = std::sqrt(s_half);
  n.f1_inv = std::sqrt(s_inv);
  n.f2 = std::sqrt(h2);
  n.total = std::sqrt(s1 + h2);
  return n;
}

double forcing_pairing(const BasisPlan& plan, const Forcing& forcing, const VelocityState& u) {
  return inner_l2(plan, VelocityState{forcing.f1_curl, forcing.f2}, u);
}

EnergyBalance energy_balance(const BasisPlan& plan, const VelocityState& state,
                             const ModelParams& params) {
  const auto du = rhs_u(plan, state, params);
  const double a2 = params.alpha * params.alpha;
  EnergyBalance e;
  e.dE1_dt = 2.0 * (inner_l2(plan, state, du) + a2 * inner_v(plan, state, du));
  const double v2 = inner_v(plan, state, state);
  const double au2 = std::pow(norm_stokes(plan, state), 2);
  const double u2 = inner_l2(plan, state, state);
  const double dissipation = 2.0 * params.nu * (v2 + a2 * au2);
  const double drag = 2.0 * params.sigma * u2;
  const double work = 2.0 * forcing_pairing(plan, params.forcing, state);
  e.predicted = -dissipation - drag + work;
  const double scale = std::max({dissipation, drag, std::abs(work), std::abs(e.dE1_dt)});
  e.residual = scale > 0.0 ? std::abs(e.dE1_dt - e.predicted) / scale : 0.0;
  return e;
}

}  // namespace bardina
