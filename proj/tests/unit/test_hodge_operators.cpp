#include <cmath>
#include <numbers>
#include <random>

#include "bardina/errors.hpp"
#include "bardina/hodge_operators.hpp"
#include "doctest.h"

using namespace bardina;

namespace {

VelocityState test_state(const BasisPlan& plan, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  VelocityState s = zero_state(plan);
  auto lam = plan.eigenvalues();
  for (std::size_t i = 0; i < s.psi.size(); ++i) s.psi[i] = dist(rng) / lam[i];
  for (auto& h : s.harmonic.values) h = dist(rng);
  s.psi = dealias(plan, s.psi);
  return s;
}

VelocityState mode_state(const BasisPlan& plan, SpectralIndex idx, double amp = 1.0) {
  VelocityState s = zero_state(plan);
  s.psi[plan.position(idx)] = amp;
  return s;
}

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("velocity grid of simple torus states") {
  const double L = 2.0 * std::numbers::pi;
  auto plan = build_plan(Geometry::torus(L), 4);
  auto y = plan.col_coordinates();

  auto zero = velocity_grid(plan, zero_state(plan));
  CHECK(max_abs(zero.e1.values) == 0.0);

  // psi = sin(y): coefficient L/sqrt(2) on the sine partner of k = (0,1)
  VelocityState s = mode_state(plan, {0, -1}, L / std::sqrt(2.0));
  auto u = velocity_grid(plan, s);
  for (std::size_t r = 0; r < plan.grid_rows(); ++r)
    for (std::size_t k = 0; k < plan.grid_cols(); ++k) {
      CHECK(std::abs(u.e1.at(r, k) + std::cos(y[k])) <= 1e-13);
      CHECK(std::abs(u.e2.at(r, k)) <= 1e-13);
    }

  VelocityState h = zero_state(plan);
  h.harmonic.values = {1.0, 0.0};
  auto uh = velocity_grid(plan, h);
  for (double x : uh.e1.values) CHECK(x == 1.0);
  for (double x : uh.e2.values) CHECK(x == 0.0);
}

TEST_CASE("vorticity, Stokes operator and filter are diagonal") {
  auto plan = build_plan(Geometry::sphere(), 4);
  auto z = scalar_vorticity(plan, mode_state(plan, {1, 0}));
  CHECK(z[plan.position({1, 0})] == -2.0);

  auto a = stokes_apply(plan, mode_state(plan, {2, 1}));
  CHECK(a.psi[plan.position({2, 1})] == 6.0);

  auto torus = build_plan(Geometry::torus(1.0), 3);
  VelocityState h = zero_state(torus);
  h.harmonic.values = {1.0, 1.0};
  CHECK(max_abs(scalar_vorticity(torus, h).values) == 0.0);
  auto ah = stokes_apply(torus, h);
  CHECK(max_abs(ah.harmonic.values) == 0.0);
  CHECK(max_abs(ah.psi.values) == 0.0);

  auto r = test_state(torus, 4);
  auto f = helmholtz_filter(torus, r, 0.5);
  CHECK(f.harmonic.values == r.harmonic.values);
  auto back = helmholtz_filter(torus, helmholtz_unfilter(torus, r, 0.3), 0.3);
  for (std::size_t i = 0; i < r.psi.size(); ++i)
    CHECK(std::abs(back.psi[i] - r.psi[i]) <= 1e-14 * std::abs(r.psi[i]) + 1e-300);

  // lambda = 6, alpha = 0.5: divide by 2.5
  VelocityState v = mode_state(plan, {2, 0}, 5.0);
  CHECK(helmholtz_unfilter(plan, v, 0.5).psi[plan.position({2, 0})] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("curl of the vorticity field reproduces the Stokes eigenrelation") {
  auto plan = build_plan(Geometry::sphere(), 10);
  auto s = test_state(plan, 8);
  // n x grad(zeta) has streamfunction zeta = -lambda psi; A u has lambda psi.
  auto zeta = scalar_vorticity(plan, s);
  auto curl_zeta = rotate90(surface_gradient(plan, zeta));
  auto psi = leray_project(plan, curl_zeta);
  auto lam = plan.eigenvalues();
  for (std::size_t i = 0; i < psi.size(); ++i)
    CHECK(std::abs(-psi[i] - lam[i] * s.psi[i]) <= 1e-10 * (1.0 + lam[i] * std::abs(s.psi[i])));
}

TEST_CASE("Leray and harmonic projections") {
  for (auto geom : {Geometry::sphere(), Geometry::torus(2.5)}) {
    auto plan = build_plan(geom, 12);
    auto s = test_state(plan, 21);
    auto u = velocity_grid(plan, s);
    auto psi = leray_project(plan, u);
    double scale = max_abs(s.psi.values);
    for (std::size_t i = 0; i < psi.size(); ++i) CHECK(std::abs(psi[i] - s.psi[i]) <= 1e-10 * scale);

    auto grad = surface_gradient(plan, s.psi);
    CHECK(max_abs(leray_project(plan, grad).values) <= 1e-10 * scale);

    auto h = harmonic_project(plan, u);
    CHECK(h.size() == plan.harmonic_dim());
    for (std::size_t i = 0; i < h.size(); ++i) CHECK(std::abs(h.values[i] - s.harmonic.values[i]) <= 1e-12);

    auto div = divergence_moments(plan, u);
    CHECK(max_abs(div.values) <= 1e-10 * norm_v(plan, s));
  }
  auto torus = build_plan(Geometry::torus(1.0), 5);
  VectorGridField c{torus.make_grid(), torus.make_grid()};
  for (auto& x : c.e1.values) x = 2.0;
  for (auto& x : c.e2.values) x = -3.0;
  CHECK(max_abs(leray_project(torus, c).values) <= 1e-13);
  auto hc = harmonic_project(torus, c);
  CHECK(hc.values[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(hc.values[1] == doctest::Approx(-3.0).epsilon(1e-14));
}

TEST_CASE("inner products and Poincare inequality") {
  auto plan = build_plan(Geometry::sphere(), 6);
  // |u| = 1 on a lambda = 2 mode needs psi^2 * 2 = 1
  VelocityState e = mode_state(plan, {1, 1}, 1.0 / std::sqrt(2.0));
  CHECK(norm_l2(plan, e) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(inner_weighted(plan, e, e, 1.0) == doctest::Approx(3.0).epsilon(1e-15));

  VelocityState f = mode_state(plan, {2, -1});
  CHECK(inner_l2(plan, e, f) == 0.0);
  CHECK(inner_v(plan, e, f) == 0.0);
  CHECK(inner_weighted(plan, e, f, 0.7) == 0.0);

  auto a = test_state(plan, 1), b = test_state(plan, 2);
  CHECK(inner_weighted(plan, a, b, 0.8) ==
        doctest::Approx(0.64 * inner_v(plan, a, b) + inner_l2(plan, a, b)).epsilon(1e-14));

  const double lam1 = plan.first_eigenvalue();
  CHECK(norm_l2(plan, a) <= norm_v(plan, a) / std::sqrt(lam1));
  CHECK(norm_l2(plan, e) == doctest::Approx(norm_v(plan, e) / std::sqrt(lam1)).epsilon(1e-15));
  CHECK(norm_stokes(plan, e) == doctest::Approx(2.0).epsilon(1e-15));

  const double L = 2.0 * std::numbers::pi;
  auto torus = build_plan(Geometry::torus(L), 3);
  VelocityState h = zero_state(torus);
  h.harmonic.values = {1.0, 0.0};
  CHECK(norm_l2(torus, h) == doctest::Approx(L).epsilon(1e-15));
  CHECK(norm_v(torus, h) == 0.0);

  auto other = build_plan(Geometry::sphere(), 5);
  CHECK_THROWS_AS(inner_l2(other, a, b), ShapeError);
}

TEST_CASE("trilinear form identities") {
  for (auto geom : {Geometry::sphere(), Geometry::torus(2.0 * std::numbers::pi)}) {
    auto plan = build_plan(geom, 16);
    for (unsigned seed = 0; seed < 3; ++seed) {
      auto u = test_state(plan, 100 + seed);
      auto v = test_state(plan, 200 + seed);
      auto w = test_state(plan, 300 + seed);
      const double scale = norm_l2(plan, u) * std::pow(norm_h1(plan, v), 2);
      CHECK(std::abs(trilinear_b(plan, u, v, v)) <= 1e-10 * scale);
      const double bvw = trilinear_b(plan, u, v, w);
      const double bwv = trilinear_b(plan, u, w, v);
      CHECK(std::abs(bvw + bwv) <= 1e-10 * (std::abs(bvw) + scale));
    }
  }
}

TEST_CASE("b(u,u,Au) vanishes on the sphere") {
  auto plan = build_plan(Geometry::sphere(), 16);
  for (unsigned seed = 0; seed < 3; ++seed) {
    auto u = test_state(plan, 7 + seed);
    auto au = stokes_apply(plan, u);
    const double scale = norm_l2(plan, u) * norm_v(plan, u) * norm_stokes(plan, u);
    CHECK(std::abs(trilinear_b(plan, u, u, au)) <= 1e-9 * scale);
  }
}

TEST_CASE("golden torus value of b matches direct quadrature") {
  const double L = 2.0 * std::numbers::pi;
  auto plan = build_plan(Geometry::torus(L), 4);
  auto x = plan.row_coordinates();
  auto y = plan.col_coordinates();
  auto sample = [&](auto fn) {
    auto g = plan.make_grid();
    for (std::size_t r = 0; r < plan.grid_rows(); ++r)
      for (std::size_t k = 0; k < plan.grid_cols(); ++k) g.at(r, k) = fn(x[r], y[k]);
    return g;
  };
  auto state_of = [&](auto fn) {
    VelocityState s = zero_state(plan);
    s.psi = analyze(plan, sample(fn));
    return s;
  };
  auto u = state_of([](double a, double) { return std::cos(a); });
  auto v = state_of([](double, double b) { return std::cos(b); });
  auto w = state_of([](double a, double b) { return std::cos(a + b); });

  // Oracle: integral of (u . grad) v . w with analytic velocity fields,
  // u = (-psi_y, psi_x) evaluated on an independent fine uniform grid.
  const int n = 96;
  const double h = L / n;
  double oracle = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = i * h, b = j * h;
      const double u1 = 0.0, u2 = -std::sin(a);
      // v = (sin y, 0)
      const double dv1_dx = 0.0, dv1_dy = std::cos(b);
      const double w1 = std::sin(a + b), w2 = -std::sin(a + b);
      const double conv1 = u1 * dv1_dx + u2 * dv1_dy;
      const double conv2 = 0.0;
      oracle += (conv1 * w1 + conv2 * w2) * h * h;
    }
  const double value = trilinear_b(plan, u, v, w);
  CHECK(value == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(value == doctest::Approx(-std::numbers::pi * std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("flipped first term breaks the antisymmetry identity") {
  auto plan = build_plan(Geometry::sphere(), 8);
  auto u = test_state(plan, 1);
  auto v = test_state(plan, 2);
  const double scale = norm_l2(plan, u) * std::pow(norm_h1(plan, v), 2);
  CHECK(std::abs(trilinear_b(plan, u, v, v, TrilinearFault::flip_first_term)) > 1e-6 * scale);
}
