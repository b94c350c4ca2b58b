#pragma once

// Vector-field layer over the scalar basis. A divergence-free tangent field
// is stored as u = n x grad(psi) + h, with psi a mean-free streamfunction and
// h the harmonic (spatially constant on the torus, absent on the sphere)
// component. With this convention the scalar vorticity is zeta = Lap psi,
// so coefficient-wise zeta = -lambda psi and the Stokes operator is psi ->
// lambda psi.

#include <cstdint>
#include <vector>

#include "bardina/spectral_basis.hpp"

namespace bardina {

/// Empty on the sphere, (h1, h2) on the torus.
struct HarmonicVector {
  std::vector<double> values;
  std::size_t size() const { return values.size(); }
};

struct VelocityState {
  ScalarCoeffs psi;
  HarmonicVector harmonic;
};

VelocityState zero_state(const BasisPlan& plan);

/// Seeded random state with psi_i ~ N(0,1) lambda_i^{-slope/2}, dealiased
/// unless asked otherwise, and (torus, optionally) N(0,1) harmonic components.
VelocityState random_state(const BasisPlan& plan, std::uint64_t seed, double slope = 2.0,
                           bool with_harmonic = true, bool dealiased = true);
void check_state(const BasisPlan& plan, const VelocityState& state);

/// Flat view used by the integrators: psi coefficients then harmonic pair.
std::vector<double> to_flat(const VelocityState& state);
VelocityState from_flat(const BasisPlan& plan, const double* data);
std::size_t flat_size(const BasisPlan& plan);

VectorGridField velocity_grid(const BasisPlan& plan, const VelocityState& state);
ScalarCoeffs scalar_vorticity(const BasisPlan& plan, const VelocityState& state);
VelocityState stokes_apply(const BasisPlan& plan, const VelocityState& state);

/// v = (I + alpha^2 A) u on the streamfunction part; harmonic part unchanged.
VelocityState helmholtz_filter(const BasisPlan& plan, const VelocityState& u, double alpha);
VelocityState helmholtz_unfilter(const BasisPlan& plan, const VelocityState& v, double alpha);

/// Streamfunction of the Leray projection of a tangent grid field.
ScalarCoeffs leray_project(const BasisPlan& plan, const VectorGridField& g);
/// Area mean of g on the torus; empty on the sphere.
HarmonicVector harmonic_project(const BasisPlan& plan, const VectorGridField& g);

/// Plain L^2(TM) pairing <u, w>.
double inner_l2(const BasisPlan& plan, const VelocityState& a, const VelocityState& b);
/// <curl_n u, curl_n w>.
double inner_v(const BasisPlan& plan, const VelocityState& a, const VelocityState& b);
/// alpha^2 <curl_n u, curl_n w> + <u, w>.
double inner_weighted(const BasisPlan& plan, const VelocityState& a, const VelocityState& b,
                      double alpha);

double norm_l2(const BasisPlan& plan, const VelocityState& u);
double norm_v(const BasisPlan& plan, const VelocityState& u);
/// |A u|.
double norm_stokes(const BasisPlan& plan, const VelocityState& u);
/// H^1 norm, sqrt(|u|^2 + ||u||^2).
double norm_h1(const BasisPlan& plan, const VelocityState& u);

/// Deliberate convention faults, used only to prove the identity checks can fail.
enum class TrilinearFault { none, flip_first_term };

/// b(u, v, w) evaluated by quadrature of the symmetric three-term form
///   1/2 [ -(u x v).curl_n w + (curl_n u x v).w - (u x curl_n v).w ].
double trilinear_b(const BasisPlan& plan, const VelocityState& u, const VelocityState& v,
                   const VelocityState& w, TrilinearFault fault = TrilinearFault::none);

/// Pointwise n x g, i.e. the +90 degree tangent rotation (a, b) -> (-b, a).
VectorGridField rotate90(const VectorGridField& g);

/// <u, grad Y> for every mode Y, by quadrature. Vanishes for divergence-free u.
ScalarCoeffs divergence_moments(const BasisPlan& plan, const VectorGridField& u);

}  // namespace bardina
