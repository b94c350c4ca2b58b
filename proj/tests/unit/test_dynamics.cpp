#include <cmath>
#include <numbers>

#include "bardina/dynamics.hpp"
#include "bardina/errors.hpp"
#include "doctest.h"

using namespace bardina;

namespace {

ModelParams params_for(const BasisPlan& plan, double nu, double alpha, double sigma) {
  ModelParams p;
  p.nu = nu;
  p.alpha = alpha;
  p.sigma = sigma;
  p.forcing = zero_forcing(plan);
  return p;
}

VelocityState combo(const VelocityState& a, double s, const VelocityState& b) {
  VelocityState out = a;
  for (std::size_t i = 0; i < out.psi.size(); ++i) out.psi[i] += s * b.psi[i];
  for (std::size_t j = 0; j < out.harmonic.size(); ++j) out.harmonic.values[j] += s * b.harmonic.values[j];
  return out;
}

double flat_norm(const VelocityState& a) {
  double s = 0.0;
  for (double x : a.psi.values) s += x * x;
  for (double x : a.harmonic.values) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("parameter validation") {
  auto sphere = build_plan(Geometry::sphere(), 4);
  auto torus = build_plan(Geometry::torus(2.0 * std::numbers::pi), 4);
  CHECK_NOTHROW(validate_params(sphere, params_for(sphere, 1, 1, 0)));
  CHECK_THROWS_AS(validate_params(sphere, params_for(sphere, 0, 1, 0)), ConfigError);
  CHECK_THROWS_AS(validate_params(sphere, params_for(sphere, 1, -1, 0)), ConfigError);
  CHECK_THROWS_AS(validate_params(sphere, params_for(sphere, 1, 1, -0.5)), ConfigError);
  CHECK_THROWS_AS(validate_params(torus, params_for(torus, 1, 1, 0)), ConfigError);
  CHECK_NOTHROW(validate_params(torus, params_for(torus, 1, 1, 0.1)));
  auto wrong = params_for(sphere, 1, 1, 0);
  wrong.forcing = zero_forcing(torus);
  CHECK_THROWS_AS(validate_params(sphere, wrong), ConfigError);
}

TEST_CASE("linear part of rhs_u on a single eigenmode") {
  auto plan = build_plan(Geometry::sphere(), 6);
  auto p = params_for(plan, 0.7, 0.5, 0.3);
  VelocityState u = zero_state(plan);
  const std::size_t i = plan.position({3, -2});
  u.psi[i] = 2.0;
  const double lam = 12.0;
  const auto du = rhs_u(plan, u, p);
  // A single spherical harmonic has zeta parallel to psi, so the nonlinearity vanishes.
  CHECK(du.psi[i] == doctest::Approx(-(0.7 * lam + 0.3 / (1 + 0.25 * lam)) * 2.0).epsilon(1e-12));
  for (std::size_t k = 0; k < du.psi.size(); ++k)
    if (k != i) CHECK(std::abs(du.psi[k]) < 1e-12);
}

TEST_CASE("harmonic component decays by drag and is pushed by f2") {
  auto plan = build_plan(Geometry::torus(2.0 * std::numbers::pi), 5);
  auto p = params_for(plan, 1, 1, 0.4);
  p.forcing.f2.values = {0.2, -0.1};
  VelocityState u = zero_state(plan);
  u.harmonic.values = {1.0, 2.0};
  const auto du = rhs_u(plan, u, p);
  CHECK(du.harmonic.values[0] == doctest::Approx(0.2 - 0.4));
  CHECK(du.harmonic.values[1] == doctest::Approx(-0.1 - 0.8));
  CHECK(flat_norm(VelocityState{du.psi, {}}) < 1e-14);
}

TEST_CASE("tangent matches a central finite difference of rhs_u") {
  for (auto geometry : {Geometry::sphere(), Geometry::torus(2.0 * std::numbers::pi)}) {
    auto plan = build_plan(geometry, 12);
    auto p = params_for(plan, 0.05, 0.3, geometry.is_torus() ? 0.2 : 0.0);
    p.forcing.f1_curl[2] = 0.5;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto u = random_state(plan, 100 + s);
      const auto U = random_state(plan, 200 + s);
      const double eps = 1e-6;
      const auto plus = rhs_u(plan, combo(u, eps, U), p);
      const auto minus = rhs_u(plan, combo(u, -eps, U), p);
      const auto fd = combo(plus, -1.0, minus);
      const auto tangent = rhs_tangent(plan, U, u, p);
      const auto diff = combo(fd, -2.0 * eps, tangent);
      CHECK(flat_norm(diff) / (2.0 * eps) <= 1e-6 * flat_norm(tangent));
    }
  }
}

TEST_CASE("background overloads agree with direct evaluation") {
  auto plan = build_plan(Geometry::torus(3.0), 8);
  auto p = params_for(plan, 0.1, 0.2, 0.5);
  const auto u = random_state(plan, 7);
  const auto U = random_state(plan, 8);
  const auto bg = background_fields(plan, u);
  const auto a = rhs_tangent_nonstiff(plan, U, bg, p);
  const auto b = rhs_tangent_nonstiff(plan, U, u, p);
  CHECK(a.psi.values == b.psi.values);
  CHECK(a.harmonic.values == b.harmonic.values);
  const auto c = rhs_u_nonstiff(plan, u, bg, p);
  const auto d = rhs_u_nonstiff(plan, u, p);
  CHECK(c.psi.values == d.psi.values);
}

TEST_CASE("energy law holds algebraically") {
  for (auto geometry : {Geometry::sphere(), Geometry::torus(2.0 * std::numbers::pi)}) {
    auto plan = build_plan(geometry, 15);
    auto p = params_for(plan, 0.02, 0.4, geometry.is_torus() ? 0.3 : 0.1);
    p.forcing.f1_curl[4] = 1.0;
    if (geometry.is_torus()) p.forcing.f2.values = {0.3, 0.1};
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto e = energy_balance(plan, random_state(plan, s), p);
      CHECK(e.residual <= 1e-12);
    }
  }
}

TEST_CASE("forcing norms") {
  auto plan = build_plan(Geometry::sphere(), 4);
  Forcing f = zero_forcing(plan);
  f.f1_curl[plan.position({2, 0})] = 3.0;  // lambda = 6
  const auto n = forcing_norms(plan, f);
  CHECK(n.f1 == doctest::Approx(3.0 * std::sqrt(6.0)));
  CHECK(n.f1_inv_half == doctest::Approx(3.0));
  CHECK(n.f1_inv == doctest::Approx(3.0 / std::sqrt(6.0)));
  CHECK(n.f2 == 0.0);
  CHECK(n.total == doctest::Approx(n.f1));

  auto torus = build_plan(Geometry::torus(2.0), 3);
  Forcing g = zero_forcing(torus);
  g.f2.values = {3.0, 4.0};
  CHECK(forcing_norms(torus, g).f2 == doctest::Approx(5.0 * 2.0));
}

TEST_CASE("cutoff function") {
  CHECK(cutoff_theta(0.0, 1.0) == 1.0);
  CHECK(cutoff_theta(1.0, 1.0) == 1.0);
  CHECK(cutoff_theta(1.5, 1.0) == doctest::Approx(0.5));
  CHECK(cutoff_theta(2.0, 1.0) == 0.0);
  CHECK(cutoff_theta(5.0, 1.0) == 0.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double s = 1.0 + i / 1000.0;
    worst = std::max(worst, std::abs(cutoff_theta(s + 1e-7, 1.0) - cutoff_theta(s, 1.0)) / 1e-7);
  }
  CHECK(worst <= 1.5 + 1e-6);
  CHECK_THROWS_AS(cutoff_theta(1.0, 0.0), ConfigError);
}

TEST_CASE("prepared equation inside the ball is the v-form of the dynamics") {
  auto plan = build_plan(Geometry::sphere(), 10);
  auto p = params_for(plan, 0.05, 0.3, 0.2);
  p.forcing.f1_curl[3] = 0.4;
  const auto u = random_state(plan, 3);
  const auto v = helmholtz_filter(plan, u, p.alpha);
  const double rho = 10.0 * norm_l2(plan, v);
  const auto a = prepared_rhs(plan, v, p, rho);
  const auto b = rhs_v(plan, v, p);
  CHECK(flat_norm(combo(a, -1.0, b)) <= 1e-12 * flat_norm(b));

  // Far outside the ball only the linear damping remains.
  const auto far = prepared_rhs(plan, v, p, 0.1 * norm_l2(plan, v));
  for (std::size_t i = 0; i < v.psi.size(); ++i) {
    const double lam = plan.eigenvalues()[i];
    CHECK(far.psi[i] == doctest::Approx(-p.nu * lam * v.psi[i] - p.sigma * u.psi[i]).epsilon(1e-12));
  }

  auto torus = build_plan(Geometry::torus(1.0), 4);
  CHECK_THROWS_AS(prepared_rhs(torus, zero_state(torus), params_for(torus, 1, 1, 1), 1.0),
                  UnsupportedGeometryError);
}
