#pragma once

// Right-hand sides of the simplified Bardina system in u-form,
//
//   (1 + a^2 lambda) dpsi/dt = -nu lambda (1 + a^2 lambda) psi + f - N_p - sigma psi
//   dh/dt                    = f2 - sigma h - N_q
//
// where (N_p, N_q) is the Leray / harmonic split of zeta (n x u). The forcing
// f1 is carried as its streamfunction, so f1 = n x grad(f1_curl) like u.

#include "bardina/hodge_operators.hpp"

namespace bardina {

struct Forcing {
  ScalarCoeffs f1_curl;
  HarmonicVector f2;
};

struct ModelParams {
  double nu = 1.0;
  double alpha = 1.0;
  double sigma = 0.0;
  Forcing forcing;
};

/// Zero forcing shaped for the plan.
Forcing zero_forcing(const BasisPlan& plan);

/// Throws ConfigError on nu <= 0, alpha <= 0, sigma < 0, sigma == 0 on the
/// torus, or a forcing of the wrong shape.
void validate_params(const BasisPlan& plan, const ModelParams& params);

using TangentState = VelocityState;

struct NonlinearSplit {
  ScalarCoeffs p_part;
  HarmonicVector q_part;
};

NonlinearSplit nonlinear_term(const BasisPlan& plan, const VelocityState& u);

/// Linearization of nonlinear_term at u in the direction U.
NonlinearSplit tangent_nonlinear_term(const BasisPlan& plan, const VelocityState& u,
                                      const TangentState& U);

VelocityState rhs_u(const BasisPlan& plan, const VelocityState& state, const ModelParams& params);

/// rhs_u without the stiff diagonal -nu lambda psi; the harmonic part is the
/// full tendency. This is what the integrating-factor schemes step explicitly.
VelocityState rhs_u_nonstiff(const BasisPlan& plan, const VelocityState& state,
                             const ModelParams& params);

/// Grid samples of a fixed background state, shared by many tangent
/// evaluations at the same u.
struct BackgroundFields {
  VectorGridField velocity;
  GridField vorticity;
};

BackgroundFields background_fields(const BasisPlan& plan, const VelocityState& u);

NonlinearSplit nonlinear_term(const BasisPlan& plan, const BackgroundFields& background);
/// background must be background_fields(plan, state).
VelocityState rhs_u_nonstiff(const BasisPlan& plan, const VelocityState& state,
                             const BackgroundFields& background, const ModelParams& params);

TangentState rhs_tangent_nonstiff(const BasisPlan& plan, const TangentState& U,
                                  const BackgroundFields& background, const ModelParams& params);

TangentState rhs_tangent(const BasisPlan& plan, const TangentState& U, const VelocityState& u,
                         const ModelParams& params);
TangentState rhs_tangent_nonstiff(const BasisPlan& plan, const TangentState& U,
                                  const VelocityState& u, const ModelParams& params);

/// C^1 cutoff: 1 below rho, 0 above 2 rho, cubic smoothstep in between.
double cutoff_theta(double s, double rho);

/// Tendency of v = (I + a^2 A) u for the cut-off equation
///   dv/dt + nu A v + theta_rho(|v|) (R(v) - f) + sigma u = 0.
/// Sphere only.
VelocityState prepared_rhs(const BasisPlan& plan, const VelocityState& v, const ModelParams& params,
                           double rho);
VelocityState prepared_rhs_nonstiff(const BasisPlan& plan, const VelocityState& v,
                                    const ModelParams& params, double rho);

/// The v-form of rhs_u, i.e. (I + a^2 A) rhs_u(unfilter(v)).
VelocityState rhs_v(const BasisPlan& plan, const VelocityState& v, const ModelParams& params);

struct ForcingNorms {
  double f1 = 0.0;           // |f1|
  double f1_inv_half = 0.0;  // |A^{-1/2} f1|
  double f1_inv = 0.0;       // |A^{-1} f1|
  double f2 = 0.0;           // |f2|
  double total = 0.0;        // |f| = sqrt(|f1|^2 + |f2|^2)
};

ForcingNorms forcing_norms(const BasisPlan& plan, const Forcing& forcing);

/// <f, u> in L^2.
double forcing_pairing(const BasisPlan& plan, const Forcing& forcing, const VelocityState& u);

struct EnergyBalance {
  double dE1_dt = 0.0;     // 2 [u, du/dt] computed from rhs_u
  double predicted = 0.0;  // -2 nu E2 - 2 sigma |u|^2 + 2 <f, u>
  double residual = 0.0;   // |dE1_dt - predicted| relative to the largest term
};

EnergyBalance energy_balance(const BasisPlan& plan, const VelocityState& state,
                             const ModelParams& params);

}  // namespace bardina
