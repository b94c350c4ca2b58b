#include "bardina/hodge_operators.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "bardina/errors.hpp"

namespace bardina {

VelocityState zero_state(const BasisPlan& plan) {
  return VelocityState{plan.make_coeffs(), HarmonicVector{std::vector<double>(plan.harmonic_dim(), 0.0)}};
}

VelocityState random_state(const BasisPlan& plan, std::uint64_t seed, double slope, bool with_harmonic,
                           bool dealiased) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  VelocityState s = zero_state(plan);
  const auto lam = plan.eigenvalues();
  for (std::size_t i = 0; i < lam.size(); ++i) s.psi[i] = gauss(rng) * std::pow(lam[i], -0.5 * slope);
  if (dealiased) s.psi = dealias(plan, s.psi);
  if (with_harmonic)
    for (auto& h : s.harmonic.values) h = gauss(rng);
  return s;
}

void check_state(const BasisPlan& plan, const VelocityState& state) {
  check_shape(plan, state.psi);
  if (state.harmonic.size() != plan.harmonic_dim()) {
    std::ostringstream os;
    os << "harmonic component has dimension " << state.harmonic.size() << ", expected "
       << plan.harmonic_dim();
    throw ShapeError(os.str());
  }
}

std::size_t flat_size(const BasisPlan& plan) { return plan.mode_count() + plan.harmonic_dim(); }

std::vector<double> to_flat(const VelocityState& state) {
  std::vector<double> out(state.psi.values);
  out.insert(out.end(), state.harmonic.values.begin(), state.harmonic.values.end());
  return out;
}

VelocityState from_flat(const BasisPlan& plan, const double* data) {
  const std::size_t n = plan.mode_count();
  VelocityState s;
  s.psi.values.assign(data, data + n);
  s.harmonic.values.assign(data + n, data + n + plan.harmonic_dim());
  return s;
}

VectorGridField rotate90(const VectorGridField& g) {
  VectorGridField out{g.e2, g.e1};
  for (auto& x : out.e1.values) x = -x;
  return out;
}

VectorGridField velocity_grid(const BasisPlan& plan, const VelocityState& state) {
  check_state(plan, state);
  VectorGridField u = rotate90(surface_gradient(plan, state.psi));
  if (plan.harmonic_dim() == 2) {
    for (auto& x : u.e1.values) x += state.harmonic.values[0];
    for (auto& x : u.e2.values) x += state.harmonic.values[1];
  }
  return u;
}

ScalarCoeffs scalar_vorticity(const BasisPlan& plan, const VelocityState& state) {
  check_state(plan, state);
  ScalarCoeffs z = state.psi;
  const auto lam = plan.eigenvalues();
  for (std::size_t i = 0; i < z.size(); ++i) z.values[i] *= -lam[i];
  return z;
}

VelocityState stokes_apply(const BasisPlan& plan, const VelocityState& state) {
  check_state(plan, state);
  VelocityState out = state;
  const auto lam = plan.eigenvalues();
  for (std::size_t i = 0; i < out.psi.size(); ++i) out.psi.values[i] *= lam[i];
  for (auto& h : out.harmonic.values) h = 0.0;
  return out;
}

VelocityState helmholtz_filter(const BasisPlan& plan, const VelocityState& u, double alpha) {
  check_state(plan, u);
  VelocityState v = u;
  const auto lam = plan.eigenvalues();
  const double a2 = alpha * alpha;
  for (std::size_t i = 0; i < v.psi.size(); ++i) v.psi.values[i] *= 1.0 + a2 * lam[i];
  return v;
}

VelocityState helmholtz_unfilter(const BasisPlan& plan, const VelocityState& v, double alpha) {
  check_state(plan, v);
  VelocityState u = v;
  const auto lam = plan.eigenvalues();
  const double a2 = alpha * alpha;
  for (std::size_t i = 0; i < u.psi.size(); ++i) u.psi.values[i] /= 1.0 + a2 * lam[i];
  return u;
}

ScalarCoeffs leray_project(const BasisPlan& plan, const VectorGridField& g) {
  ScalarCoeffs c = analyze_rotated_gradient(plan, g);
  const auto lam = plan.eigenvalues();
  for (std::size_t i = 0; i < c.size(); ++i) c.values[i] /= lam[i];
  return c;
}

HarmonicVector harmonic_project(const BasisPlan& plan, const VectorGridField& g) {
  check_shape(plan, g.e1);
  check_shape(plan, g.e2);
  HarmonicVector h{std::vector<double>(plan.harmonic_dim(), 0.0)};
  if (plan.harmonic_dim() == 0) return h;
  const double inv_area = 1.0 / plan.area();
  h.values[0] = integrate(plan, g.e1) * inv_area;
  h.values[1] = integrate(plan, g.e2) * inv_area;
  return h;
}

namespace {

void check_pair(const BasisPlan& plan, const VelocityState& a, const VelocityState& b) {
  check_state(plan, a);
  check_state(plan, b);
}

double harmonic_dot(const BasisPlan& plan, const VelocityState& a, const VelocityState& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.harmonic.size(); ++i) s += a.harmonic.values[i] * b.harmonic.values[i];
  return plan.area() * s;
}

double weighted_sum(const BasisPlan& plan, const VelocityState& a, const VelocityState& b, int power) {
  const auto lam = plan.eigenvalues();
  double s = 0.0;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    double w = lam[i];
    for (int p = 1; p < power; ++p) w *= lam[i];
    s += w * a.psi.values[i] * b.psi.values[i];
  }
  return s;
}

}  // namespace

double inner_l2(const BasisPlan& plan, const VelocityState& a, const VelocityState& b) {
  check_pair(plan, a, b);
  return weighted_sum(plan, a, b, 1) + harmonic_dot(plan, a, b);
}

double inner_v(const BasisPlan& plan, const VelocityState& a, const VelocityState& b) {
  check_pair(plan, a, b);
  return weighted_sum(plan, a, b, 2);
}

double inner_weighted(const BasisPlan& plan, const VelocityState& a, const VelocityState& b,
                      double alpha) {
  return alpha * alpha * inner_v(plan, a, b) + inner_l2(plan, a, b);
}

double norm_l2(const BasisPlan& plan, const VelocityState& u) { return std::sqrt(inner_l2(plan, u, u)); }
double norm_v(const BasisPlan& plan, const VelocityState& u) { return std::sqrt(inner_v(plan, u, u)); }

double norm_stokes(const BasisPlan& plan, const VelocityState& u) {
  check_state(plan, u);
  return std::sqrt(weighted_sum(plan, u, u, 3));
}

double norm_h1(const BasisPlan& plan, const VelocityState& u) {
  return std::sqrt(inner_l2(plan, u, u) + inner_v(plan, u, u));
}

double trilinear_b(const BasisPlan& plan, const VelocityState& u, const VelocityState& v,
                   const VelocityState& w, TrilinearFault fault) {
  const auto uu = velocity_grid(plan, u);
  const auto vv = velocity_grid(plan, v);
  const auto ww = velocity_grid(plan, w);
  const auto zu = synthesize(plan, scalar_vorticity(plan, u));
  const auto zv = synthesize(plan, scalar_vorticity(plan, v));
  const auto zw = synthesize(plan, scalar_vorticity(plan, w));
  const double first_sign = fault == TrilinearFault::flip_first_term ? 1.0 : -1.0;
  const auto wq = plan.quadrature_weights();
  double s = 0.0;
  for (std::size_t q = 0; q < wq.size(); ++q) {
    const double u1 = uu.e1.values[q], u2 = uu.e2.values[q];
    const double v1 = vv.e1.values[q], v2 = vv.e2.values[q];
    const double w1 = ww.e1.values[q], w2 = ww.e2.values[q];
    const double uxv = u1 * v2 - u2 * v1;
    const double vxw = v1 * w2 - v2 * w1;
    const double uxw = u1 * w2 - u2 * w1;
    s += wq[q] * (first_sign * uxv * zw.values[q] + zu.values[q] * vxw + zv.values[q] * uxw);
  }
  return 0.5 * s;
}

ScalarCoeffs divergence_moments(const BasisPlan& plan, const VectorGridField& u) {
  return analyze_rotated_gradient(plan, rotate90(u));
}

}  // namespace bardina
