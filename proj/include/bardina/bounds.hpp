#pragma once

// Closed-form constants, absorbing-ball radii and attractor dimension bounds.
// Everything here is plain arithmetic on (nu, alpha, sigma), the forcing
// norms and the geometry; no basis plan is required.

#include <optional>
#include <string>
#include <vector>

#include "bardina/dynamics.hpp"

namespace bardina {

struct PhysicalInputs {
  Geometry geometry;
  double nu = 1.0;
  double alpha = 1.0;
  double sigma = 0.0;
  ForcingNorms forcing;
};

PhysicalInputs physical_inputs(const BasisPlan& plan, const ModelParams& params);

/// 2 on the unit sphere, 4 pi^2 / L^2 on the torus.
double first_eigenvalue(const Geometry& geometry);

struct Constants {
  double lambda1 = 0.0;
  double delta = 0.0;
  double delta_prime = 0.0;
  double L1 = 0.0;
  double L2 = 0.0;
  double k1 = 0.0;
  std::optional<double> k2;  // absent on the torus, where the N^2 bound is used directly
  /// True on the sphere with sigma == 0, where the decay rate nu lambda1 is
  /// used for both envelopes.
  bool sphere_rates = false;
};

/// Throws ConfigError for sigma == 0 on the torus.
Constants constants(const PhysicalInputs& in);

struct Radii {
  double rho0 = 0.0;
  double rho1 = 0.0;
  double rho1_tilde = 0.0;
  double rho2 = 0.0;
  double rho = 0.0;       // rho0 + alpha^2 rho2
  double rho_half = 0.0;  // (rho0 + alpha^2 rho2) / 2
  std::string family;     // "sphere" or "generic"
};

Radii absorbing_radii(const PhysicalInputs& in);

enum class BoundVariant { generic, sphere, torus, spherical_domain };

/// L2/delta' as it enters the dimension bounds on the sphere, in the tight
/// |A^{-1/2}f|^2 / (4 nu^2 a^2) and loose |f|^2 / (8 nu^2 a^2) forms.
struct L2OverDelta {
  double tight = 0.0;
  double loose = 0.0;
};

L2OverDelta sphere_l2_over_delta(const PhysicalInputs& in);

/// [k1 / (2 k2 lambda1 nu^2) (1 + 1/(lambda1 a^2)) X]^{1/2}.
double generic_nstar(double k1, double k2, double lambda1, double nu, double alpha,
                     double l2_over_delta);

/// Closed-form dimension bound for a variant. For the spherical domain
/// variant domain_area must be positive. Returns nullopt for the generic
/// variant on the torus (k2 is not available there).
std::optional<double> attractor_bound(const PhysicalInputs& in, BoundVariant variant,
                                      double domain_area = 0.0);

/// |f| / nu^2, or |f| |Omega| / nu^2 for the domain variant.
double grashof(const PhysicalInputs& in, BoundVariant variant, double domain_area = 0.0);

/// The q_N upper bound whose positive root is the closed-form bound, as a
/// function of a continuous N.
double qn_upper_bound(const PhysicalInputs& in, BoundVariant variant, double n,
                      double domain_area = 0.0);

struct InertialReport {
  std::vector<int> degrees;  // n = 1 .. n_max
  std::vector<double> gaps;  // lambda_{n+1} - lambda_n = 2 (n + 1)
  double c = 1.0;
  double rho = 0.0;
  double lipschitz = 0.0;  // c lambda1^{-1} a^{-4} (4 rho)
  double threshold = 0.0;  // 2 lipschitz / nu
  std::optional<int> crossing;
  std::string squeezing_rate = "not computable";
};

/// Sphere only. rho is the cutoff radius (usually Radii::rho).
InertialReport inertial_report(const PhysicalInputs& in, double rho, int n_max, double c = 1.0);

/// 2 L2 / delta'.
double average_enstrophy_bound(const PhysicalInputs& in);

inline constexpr const char* kExponentNote =
    "N* is the positive root of the q_N upper bound, so the parenthesized factor in "
    "the closed form carries the exponent +1/2 (a -1/2 there would not solve q_N = 0).";

struct BoundsReport {
  PhysicalInputs inputs;
  Constants constants;
  Radii radii;
  std::optional<double> nstar_generic;  // generic formula with the geometry's L2/delta'
  std::optional<double> nstar_generic_loose;
  double geometry_bound = 0.0;  // closed form for the sphere or torus
  double grashof = 0.0;
  double average_enstrophy = 0.0;
  std::optional<L2OverDelta> l2_over_delta;
  std::optional<InertialReport> inertial;
  std::optional<double> domain_area;
  std::optional<double> domain_bound;
};

BoundsReport bounds_report(const PhysicalInputs& in, int n_max = 5, double c = 1.0,
                           std::optional<double> domain_area = std::nullopt);

}  // namespace bardina
