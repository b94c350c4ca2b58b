#include "bardina/harness/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

namespace bardina::harness {

namespace {

ScalarCoeffs gaussian_coeffs(const BasisPlan& plan, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ScalarCoeffs c = plan.make_coeffs();
  for (double& x : c.values) x = gauss(rng);
  return c;
}

double flat_norm(const VelocityState& s) {
  double sum = 0.0;
  for (double x : s.psi.values) sum += x * x;
  for (double x : s.harmonic.values) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

double roundtrip_residual(const BasisPlan& plan, std::uint64_t seed, int draws) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < draws; ++k) {
    const auto c = gaussian_coeffs(plan, rng);
    const auto back = analyze(plan, synthesize(plan, c));
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      err += std::pow(back[i] - c[i], 2);
      ref += c[i] * c[i];
    }
    worst = std::max(worst, std::sqrt(err / ref));
  }
  return worst;
}

double parseval_residual(const BasisPlan& plan, std::uint64_t seed, int draws) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < draws; ++k) {
    const auto c = gaussian_coeffs(plan, rng);
    auto f = synthesize(plan, c);
    for (double& x : f.values) x *= x;
    double ref = 0.0;
    for (double x : c.values) ref += x * x;
    worst = std::max(worst, std::abs(integrate(plan, f) - ref) / ref);
  }
  return worst;
}

double tangent_fd_residual(const BasisPlan& plan, const ModelParams& params, std::uint64_t seed,
                           int samples, double eps) {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const auto u = random_state(plan, seed + 2 * static_cast<std::uint64_t>(k));
    const auto U = random_state(plan, seed + 2 * static_cast<std::uint64_t>(k) + 1);
    VelocityState plus = u, minus = u;
    for (std::size_t i = 0; i < u.psi.size(); ++i) {
      plus.psi[i] += eps * U.psi[i];
      minus.psi[i] -= eps * U.psi[i];
    }
    for (std::size_t j = 0; j < u.harmonic.size(); ++j) {
      plus.harmonic.values[j] += eps * U.harmonic.values[j];
      minus.harmonic.values[j] -= eps * U.harmonic.values[j];
    }
    const auto fp = rhs_u(plan, plus, params);
    const auto fm = rhs_u(plan, minus, params);
    auto diff = rhs_tangent(plan, U, u, params);
    const double ref = flat_norm(diff);
    for (std::size_t i = 0; i < diff.psi.size(); ++i) diff.psi[i] -= (fp.psi[i] - fm.psi[i]) / (2.0 * eps);
    for (std::size_t j = 0; j < diff.harmonic.size(); ++j)
      diff.harmonic.values[j] -= (fp.harmonic.values[j] - fm.harmonic.values[j]) / (2.0 * eps);
    worst = std::max(worst, ref > 0.0 ? flat_norm(diff) / ref : flat_norm(diff));
  }
  return worst;
}

double eigenmode_decay_error(const BasisPlan& plan, double nu, double alpha, double sigma,
                             std::size_t mode, double dt, double t_end) {
  ModelParams p;
  p.nu = nu;
  p.alpha = alpha;
  p.sigma = sigma;
  p.forcing = zero_forcing(plan);
  VelocityState u0 = zero_state(plan);
  u0.psi[mode] = 1.0;
  const double lam = plan.eigenvalues()[mode];
  const double rate = nu * lam + sigma / (1.0 + alpha * alpha * lam);
  const double n0 = norm_l2(plan, u0);
  double worst = 0.0;
  run(plan, u0, p, SchemeConfig{Scheme::if_rk4, dt, t_end, 1},
      [&](double t, const VelocityState& s) {
        const double expected = n0 * std::exp(-rate * t);
        worst = std::max(worst, std::abs(norm_l2(plan, s) - expected) / expected);
      },
      RunOptions{0.0, false});
  return worst;
}

void print_table(std::ostream& out, const std::vector<CheckRow>& rows) {
  char line[160];
  std::snprintf(line, sizeof line, "%-36s %13s %13s  %s\n", "check", "value", "threshold", "result");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-36s %13.4e %13.4e  %s\n", r.name.c_str(), r.value, r.threshold,
                  r.passed ? "PASS" : "FAIL");
    out << line;
  }
}

bool all_passed(const std::vector<CheckRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.passed; });
}

}  // namespace bardina::harness
