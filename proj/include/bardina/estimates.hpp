#pragma once

// Runtime checks of the a priori estimates: energy functionals along a
// trajectory, their Gronwall envelopes, the algebraic identities of the
// trilinear form, and separation of nearby trajectories.

#include <cstdint>
#include <string>
#include <vector>

#include "bardina/bounds.hpp"
#include "bardina/time_integrator.hpp"

namespace bardina {

struct DiagnosticsRecord {
  double t = 0.0;
  double norm_u_l2 = 0.0;  // |u|
  double norm_u_v = 0.0;   // ||u||
  double norm_Au = 0.0;    // |Au|
  double norm_u2 = 0.0;    // |u_2|
  double norm_v = 0.0;     // |v|, v = (I + a^2 A) u
  double E1 = 0.0;         // |u|^2 + a^2 ||u||^2
  double E2 = 0.0;         // ||u||^2 + a^2 |Au|^2
  double env1 = 0.0;
  double env2 = 0.0;
  double energy_residual = 0.0;
  int violations = 0;  // bit 0: E1 above env1, bit 1: E2 above env2
};

/// Norms and energies at time t. Envelope fields are left at zero.
DiagnosticsRecord energy_record(const BasisPlan& plan, const VelocityState& state,
                                const ModelParams& params, double t);

struct Envelopes {
  double env1 = 0.0;
  double env2 = 0.0;
};

/// Gronwall upper bounds for E1 and E2 a time t after a state with energies
/// (E1_0, E2_0). On the sphere the bounds with decay rate nu lambda1 are used;
/// with sigma > 0 the smaller of those and the generic bounds is returned.
Envelopes gronwall_envelopes(double E1_0, double E2_0, double t, const PhysicalInputs& in);

/// Discretization allowance added to the relative slack: C dt^2 with C = 1.
double envelope_slack(double dt, double base = 1e-6);

struct ViolationReport {
  std::vector<std::size_t> e1_samples;
  std::vector<std::size_t> e2_samples;
  bool empty() const { return e1_samples.empty() && e2_samples.empty(); }
};

/// Flags samples with E1 > env1 (1 + slack) or E2 > env2 (1 + slack) and
/// updates each record's violations field.
ViolationReport check_trajectory(std::vector<DiagnosticsRecord>& records, double slack);

/// Fills env1/env2 relative to the first record and checks them.
ViolationReport apply_envelopes(std::vector<DiagnosticsRecord>& records, const PhysicalInputs& in,
                                double slack);

struct IdentityRow {
  std::string name;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool passed = true;
};

struct IdentityOptions {
  int samples = 20;
  double threshold = 1e-9;
  /// Evaluate on an undersized grid without the two-thirds mask.
  bool aliased = false;
  TrilinearFault fault = TrilinearFault::none;
};

/// Relative residuals of b(u,v,v) = 0, b(u,v,w) = -b(u,w,v), <B(u,u), u> = 0,
/// the algebraic energy law, and <B(u,u), Au> = 0 (sphere) or
/// <Q(zeta x h), h> = 0 (torus), over seeded random states.
std::vector<IdentityRow> identity_suite(const BasisPlan& plan, const ModelParams& params,
                                        std::uint64_t seed, IdentityOptions options = {});

struct SeparationReport {
  std::vector<double> times;
  std::vector<double> distance;         // E1 of the difference
  std::vector<double> gronwall_integral;  // int_0^t ||u_a||_1^2 ds, trapezoid over samples
  double growth_rate = 0.0;              // least-squares slope of log distance
};

SeparationReport separation_growth(const BasisPlan& plan, const VelocityState& a,
                                   const VelocityState& b, const ModelParams& params,
                                   const SchemeConfig& config);

struct TimeAverageCheck {
  double average = 0.0;    // (1/t) int ||u||^2
  double bound = 0.0;      // 2 L2 / delta'
  double transient = 0.0;  // max(0, E2(0) - bound) / delta'
  double t = 0.0;
  bool passed = true;
};

/// Trapezoid time average of ||u||^2 over the records.
TimeAverageCheck time_average_check(const std::vector<DiagnosticsRecord>& records,
                                    const PhysicalInputs& in, double slack = 1e-6);

}  // namespace bardina
