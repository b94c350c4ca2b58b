#include "bardina/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bardina/errors.hpp"

namespace bardina {

namespace {
constexpr double kPi = std::numbers::pi;
}

PhysicalInputs physical_inputs(const BasisPlan& plan, const ModelParams& params) {
  return PhysicalInputs{plan.geometry(), params.nu, params.alpha, params.sigma,
                        forcing_norms(plan, params.forcing)};
}

double first_eigenvalue(const Geometry& geometry) {
  if (geometry.is_sphere()) return 2.0;
  return 4.0 * kPi * kPi / (geometry.length * geometry.length);
}

Constants constants(const PhysicalInputs& in) {
  if (!(in.nu > 0.0) || !(in.alpha > 0.0) || !(in.sigma >= 0.0))
    throw ConfigError("nu and alpha must be positive and sigma non-negative");
  if (in.geometry.is_torus() && in.sigma == 0.0)
    throw ConfigError("sigma must be positive on the torus");

  Constants c;
  c.lambda1 = first_eigenvalue(in.geometry);
  c.k1 = 3.0 / (2.0 * kPi);
  if (in.geometry.is_sphere()) c.k2 = 0.25;

  const double nu = in.nu, a2 = in.alpha * in.alpha;
  const auto& f = in.forcing;
  c.L1 = std::min(f.f1_inv * f.f1_inv / (nu * a2), f.f1_inv_half * f.f1_inv_half / nu);
  if (in.sigma > 0.0) c.L1 += f.f2 * f.f2 / in.sigma;
  c.L2 = std::min(f.f1_inv_half * f.f1_inv_half / (nu * a2), f.f1 * f.f1 / nu);

  if (in.geometry.is_sphere() && in.sigma == 0.0) {
    c.sphere_rates = true;
    c.delta = nu * c.lambda1;
    c.delta_prime = nu * c.lambda1;
  } else {
    c.delta = std::min(nu * c.lambda1, in.sigma);
    c.delta_prime = std::min(1.5 * nu * c.lambda1, 2.0 * in.sigma);
  }
  return c;
}

Radii absorbing_radii(const PhysicalInputs& in) {
  const Constants c = constants(in);
  const double a2 = in.alpha * in.alpha;
  const double lam1 = c.lambda1;
  Radii r;
  if (in.geometry.is_sphere()) {
    r.family = "sphere";
    const double nu2 = in.nu * in.nu;
    const double inv = in.forcing.f1_inv, half = in.forcing.f1_inv_half;
    r.rho0 = 2.0 * inv / std::sqrt((1.0 + a2 * lam1) * nu2 * a2 * lam1);
    r.rho1 = 2.0 * inv / std::sqrt(nu2 * a2 * a2 * lam1);
    r.rho1_tilde = 2.0 * half / std::sqrt((1.0 + a2 * lam1) * nu2 * a2 * lam1);
    r.rho2 = 2.0 * half / std::sqrt(nu2 * a2 * a2 * lam1);
  } else {
    r.family = "generic";
    r.rho0 = 2.0 * std::sqrt(c.L1 / ((1.0 + a2 * lam1) * c.delta));
    r.rho1 = 2.0 * std::sqrt(c.L1 / (a2 * c.delta));
    r.rho1_tilde = 2.0 * std::sqrt(c.L2 / ((1.0 + a2 * lam1) * c.delta_prime));
    r.rho2 = 2.0 * std::sqrt(c.L2 / (a2 * c.delta_prime));
  }
  r.rho = r.rho0 + a2 * r.rho2;
  r.rho_half = 0.5 * r.rho;
  return r;
}

L2OverDelta sphere_l2_over_delta(const PhysicalInputs& in) {
  const double d = in.nu * in.nu * in.alpha * in.alpha;
  return L2OverDelta{in.forcing.f1_inv_half * in.forcing.f1_inv_half / (4.0 * d),
                     in.forcing.total * in.forcing.total / (8.0 * d)};
}

double generic_nstar(double k1, double k2, double lambda1, double nu, double alpha,
                     double l2_over_delta) {
  const double factor = k1 / (2.0 * k2 * lambda1 * nu * nu) * (1.0 + 1.0 / (lambda1 * alpha * alpha));
  return std::sqrt(factor * l2_over_delta);
}

double grashof(const PhysicalInputs& in, BoundVariant variant, double domain_area) {
  const double g = in.forcing.total / (in.nu * in.nu);
  if (variant == BoundVariant::spherical_domain) {
    if (!(domain_area > 0.0)) throw ConfigError("domain area must be positive");
    return g * domain_area;
  }
  return g;
}

std::optional<double> attractor_bound(const PhysicalInputs& in, BoundVariant variant,
                                      double domain_area) {
  const double a = in.alpha;
  switch (variant) {
    case BoundVariant::generic: {
      const Constants c = constants(in);
      if (!c.k2) return std::nullopt;
      return generic_nstar(c.k1, *c.k2, c.lambda1, in.nu, a, sphere_l2_over_delta(in).loose);
    }
    case BoundVariant::sphere: {
      const double G = grashof(in, variant);
      return std::sqrt(3.0) * G / (4.0 * std::sqrt(kPi) * a) * std::sqrt(1.0 + 1.0 / (2.0 * a * a));
    }
    case BoundVariant::torus: {
      if (!in.geometry.is_torus()) throw UnsupportedGeometryError("torus bound needs a torus geometry");
      const double L = in.geometry.length;
      const double G = grashof(in, variant);
      return 3.0 * std::numbers::sqrt2 * L * L * L / (16.0 * kPi * kPi * kPi * a) *
             std::sqrt(1.0 + L * L / (4.0 * kPi * kPi * a * a)) * G;
    }
    case BoundVariant::spherical_domain: {
      const double G = grashof(in, variant, domain_area);
      return std::sqrt(3.0 / kPi) / (8.0 * kPi * a) * std::sqrt(1.0 + domain_area / (2.0 * kPi * a * a)) * G;
    }
  }
  return std::nullopt;
}

double qn_upper_bound(const PhysicalInputs& in, BoundVariant variant, double n, double domain_area) {
  const double nu = in.nu, a2 = in.alpha * in.alpha;
  const double f2 = in.forcing.total * in.forcing.total;
  switch (variant) {
    case BoundVariant::generic:
    case BoundVariant::sphere: {
      const Constants c = constants(in);
      if (!c.k2) throw UnsupportedGeometryError("k2 is only available on the sphere");
      const double x = sphere_l2_over_delta(in).loose;
      return -0.5 * nu * *c.k2 * c.lambda1 * n * n +
             c.k1 / (4.0 * nu) * (1.0 + 1.0 / (c.lambda1 * a2)) * x;
    }
    case BoundVariant::torus: {
      const double L = in.geometry.length;
      const double pi5 = std::pow(kPi, 5);
      return -nu * kPi * n * n / (6.0 * L * L) +
             3.0 * std::pow(L, 4) / (256.0 * pi5 * a2) * (1.0 + L * L / (4.0 * kPi * kPi * a2)) * f2 /
                 (nu * nu * nu);
    }
    case BoundVariant::spherical_domain: {
      const double om = domain_area;
      return -kPi * n * n * nu / om +
             3.0 / (64.0 * kPi * kPi * a2) * (1.0 + om / (2.0 * kPi * a2)) * f2 * om / (nu * nu * nu);
    }
  }
  return 0.0;
}

InertialReport inertial_report(const PhysicalInputs& in, double rho, int n_max, double c) {
  if (!in.geometry.is_sphere()) throw UnsupportedGeometryError("the spectral gap report is sphere only");
  if (n_max < 1) throw ConfigError("n_max must be at least 1");
  if (!(c > 0.0)) throw ConfigError("the Lipschitz constant c must be positive");
  InertialReport r;
  r.c = c;
  r.rho = rho;
  const double lam1 = first_eigenvalue(in.geometry);
  r.lipschitz = c / lam1 / std::pow(in.alpha, 4) * 4.0 * rho;
  r.threshold = 2.0 * r.lipschitz / in.nu;
  for (int n = 1; n <= n_max; ++n) {
    r.degrees.push_back(n);
    r.gaps.push_back(2.0 * (n + 1));
  }
  // gap 2(n+1) > threshold  <=>  n > threshold / 2 - 1
  int n = std::max(1, static_cast<int>(std::floor(r.threshold / 2.0 - 1.0)));
  while (2.0 * (n + 1) <= r.threshold) ++n;
  r.crossing = n;
  return r;
}

double average_enstrophy_bound(const PhysicalInputs& in) {
  const Constants c = constants(in);
  return 2.0 * c.L2 / c.delta_prime;
}

BoundsReport bounds_report(const PhysicalInputs& in, int n_max, double c,
                           std::optional<double> domain_area) {
  BoundsReport r;
  r.inputs = in;
  r.constants = constants(in);
  r.radii = absorbing_radii(in);
  r.grashof = grashof(in, BoundVariant::sphere);
  r.average_enstrophy = average_enstrophy_bound(in);
  if (in.geometry.is_sphere()) {
    const auto x = sphere_l2_over_delta(in);
    r.l2_over_delta = x;
    const auto& k = r.constants;
    r.nstar_generic = generic_nstar(k.k1, *k.k2, k.lambda1, in.nu, in.alpha, x.tight);
    r.nstar_generic_loose = generic_nstar(k.k1, *k.k2, k.lambda1, in.nu, in.alpha, x.loose);
    r.geometry_bound = *attractor_bound(in, BoundVariant::sphere);
    r.inertial = inertial_report(in, r.radii.rho, n_max, c);
  } else {
    r.geometry_bound = *attractor_bound(in, BoundVariant::torus);
  }
  if (domain_area) {
    r.domain_area = *domain_area;
    r.domain_bound = *attractor_bound(in, BoundVariant::spherical_domain, *domain_area);
  }
  return r;
}

}  // namespace bardina
