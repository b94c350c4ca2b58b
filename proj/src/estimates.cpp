#include "bardina/estimates.hpp"

#include <algorithm>
#include <cmath>

namespace bardina {

DiagnosticsRecord energy_record(const BasisPlan& plan, const VelocityState& state,
                                const ModelParams& params, double t) {
  DiagnosticsRecord r;
  r.t = t;
  const double a2 = params.alpha * params.alpha;
  const double u2 = inner_l2(plan, state, state);
  const double v2 = inner_v(plan, state, state);
  const double au = norm_stokes(plan, state);
  double h2 = 0.0;
  for (double h : state.harmonic.values) h2 += h * h;
  r.norm_u_l2 = std::sqrt(u2);
  r.norm_u_v = std::sqrt(v2);
  r.norm_Au = au;
  r.norm_u2 = std::sqrt(h2 * plan.area());
  r.norm_v = norm_l2(plan, helmholtz_filter(plan, state, params.alpha));
  r.E1 = u2 + a2 * v2;
  r.E2 = v2 + a2 * au * au;
  r.energy_residual = energy_balance(plan, state, params).residual;
  return r;
}

namespace {

double relax(double start, double limit, double rate, double t) {
  const double e = std::exp(-rate * t);
  return e * start + limit * (1.0 - e);
}

}  // namespace

Envelopes gronwall_envelopes(double E1_0, double E2_0, double t, const PhysicalInputs& in) {
  const Constants c = constants(in);
  Envelopes generic{relax(E1_0, c.L1 / c.delta, c.delta, t),
                    relax(E2_0, 2.0 * c.L2 / c.delta_prime, c.delta_prime, t)};
  if (!in.geometry.is_sphere()) return generic;

  const double rate = in.nu * c.lambda1;
  const double d = in.nu * in.nu * in.alpha * in.alpha * c.lambda1;
  Envelopes sphere{relax(E1_0, in.forcing.f1_inv * in.forcing.f1_inv / d, rate, t),
                   relax(E2_0, in.forcing.f1_inv_half * in.forcing.f1_inv_half / d, rate, t)};
  if (c.sphere_rates) return sphere;
  return Envelopes{std::min(generic.env1, sphere.env1), std::min(generic.env2, sphere.env2)};
}

double envelope_slack(double dt, double base) { return base + dt * dt; }

ViolationReport check_trajectory(std::vector<DiagnosticsRecord>& records, double slack) {
  ViolationReport report;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& r = records[i];
    r.violations = 0;
    if (r.E1 > r.env1 * (1.0 + slack)) {
      r.violations |= 1;
      report.e1_samples.push_back(i);
    }
    if (r.E2 > r.env2 * (1.0 + slack)) {
      r.violations |= 2;
      report.e2_samples.push_back(i);
    }
  }
  return report;
}

ViolationReport apply_envelopes(std::vector<DiagnosticsRecord>& records, const PhysicalInputs& in,
                                double slack) {
  if (records.empty()) return {};
  const double t0 = records.front().t;
  const double E1_0 = records.front().E1, E2_0 = records.front().E2;
  for (auto& r : records) {
    const auto env = gronwall_envelopes(E1_0, E2_0, r.t - t0, in);
    r.env1 = env.env1;
    r.env2 = env.env2;
  }
  return check_trajectory(records, slack);
}

namespace {

double safe_ratio(double num, double den) { return den > 0.0 ? std::abs(num) / den : std::abs(num); }

// <N, w> in L^2 for a split nonlinearity N = (N_p, N_q).
double pair_split(const BasisPlan& plan, const NonlinearSplit& n, const VelocityState& w) {
  return inner_l2(plan, VelocityState{n.p_part, n.q_part}, w);
}

}  // namespace

std::vector<IdentityRow> identity_suite(const BasisPlan& base_plan, const ModelParams& params,
                                        std::uint64_t seed, IdentityOptions options) {
  const BasisPlan plan = options.aliased
                             ? build_plan(base_plan.geometry(), base_plan.truncation(), PlanOptions{true})
                             : base_plan;
  const bool sphere = plan.geometry().is_sphere();
  ModelParams unforced = params;
  unforced.forcing = zero_forcing(plan);

  std::vector<IdentityRow> rows = {
      {"b(u,v,v)", 0.0, options.threshold, true},
      {"b(u,v,w)+b(u,w,v)", 0.0, options.threshold, true},
      {"<B(u,u),u>", 0.0, options.threshold, true},
      {"energy law", 0.0, 1e-12, true},
      {sphere ? "<B(u,u),Au>" : "<Q(zeta x h),h>", 0.0, options.threshold, true},
  };

  // Aliased mode keeps the full band so the undersized grid folds products back.
  auto draw = [&](std::uint64_t s) { return random_state(plan, s, 2.0, true, !options.aliased); };

  for (int k = 0; k < options.samples; ++k) {
    const std::uint64_t s = seed + 3 * static_cast<std::uint64_t>(k);
    const VelocityState u = draw(s), v = draw(s + 1), w = draw(s + 2);
    const double nu_l2 = norm_l2(plan, u), nv1 = norm_h1(plan, v), nw1 = norm_h1(plan, w);

    const double bvv = trilinear_b(plan, u, v, v, options.fault);
    rows[0].max_residual = std::max(rows[0].max_residual, safe_ratio(bvv, nu_l2 * nv1 * nv1));

    const double anti =
        trilinear_b(plan, u, v, w, options.fault) + trilinear_b(plan, u, w, v, options.fault);
    rows[1].max_residual = std::max(rows[1].max_residual, safe_ratio(anti, nu_l2 * nv1 * nw1));

    const auto n = nonlinear_term(plan, u);
    const double nu1 = norm_h1(plan, u);
    rows[2].max_residual =
        std::max(rows[2].max_residual, safe_ratio(pair_split(plan, n, u), nu_l2 * nu1 * nu1));

    rows[3].max_residual = std::max(rows[3].max_residual, energy_balance(plan, u, unforced).residual);

    if (sphere) {
      const auto au = stokes_apply(plan, u);
      const double scale = nu_l2 * norm_v(plan, u) * norm_stokes(plan, u);
      rows[4].max_residual = std::max(rows[4].max_residual, safe_ratio(pair_split(plan, n, au), scale));
    } else {
      // zeta (n x h) for the harmonic part h of u, projected onto constants.
      const auto zeta = synthesize(plan, scalar_vorticity(plan, u));
      VectorGridField g{plan.make_grid(), plan.make_grid()};
      const double h1 = u.harmonic.values[0], h2 = u.harmonic.values[1];
      for (std::size_t q = 0; q < zeta.values.size(); ++q) {
        g.e1.values[q] = -zeta.values[q] * h2;
        g.e2.values[q] = zeta.values[q] * h1;
      }
      const auto qh = harmonic_project(plan, g);
      const double value = plan.area() * (qh.values[0] * h1 + qh.values[1] * h2);
      const double hh = h1 * h1 + h2 * h2;
      const double scale = norm_v(plan, u) * hh * plan.geometry().length;
      rows[4].max_residual = std::max(rows[4].max_residual, safe_ratio(value, scale));
    }
  }
  for (auto& r : rows) r.passed = r.max_residual <= r.threshold;
  return rows;
}

SeparationReport separation_growth(const BasisPlan& plan, const VelocityState& a,
                                   const VelocityState& b, const ModelParams& params,
                                   const SchemeConfig& config) {
  RunOptions opts;
  opts.keep_states = true;
  const auto ta = run(plan, a, params, config, {}, opts);
  const auto tb = run(plan, b, params, config, {}, opts);
  SeparationReport rep;
  const double a2 = params.alpha * params.alpha;
  double integral = 0.0;
  double prev_h1 = 0.0;
  for (std::size_t i = 0; i < ta.times.size(); ++i) {
    VelocityState d = ta.states[i];
    for (std::size_t k = 0; k < d.psi.size(); ++k) d.psi[k] -= tb.states[i].psi[k];
    for (std::size_t k = 0; k < d.harmonic.size(); ++k) d.harmonic.values[k] -= tb.states[i].harmonic.values[k];
    rep.times.push_back(ta.times[i]);
    rep.distance.push_back(inner_l2(plan, d, d) + a2 * inner_v(plan, d, d));
    const double h1 = std::pow(norm_h1(plan, ta.states[i]), 2);
    if (i > 0) integral += 0.5 * (h1 + prev_h1) * (ta.times[i] - ta.times[i - 1]);
    prev_h1 = h1;
    rep.gronwall_integral.push_back(integral);
  }
  // Least-squares slope of log(distance) against t over the positive samples.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    if (!(rep.distance[i] > 0.0)) continue;
    const double x = rep.times[i], y = std::log(rep.distance[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2) {
    const double den = n * sxx - sx * sx;
    if (den > 0.0) rep.growth_rate = (n * sxy - sx * sy) / den;
  }
  return rep;
}

TimeAverageCheck time_average_check(const std::vector<DiagnosticsRecord>& records,
                                    const PhysicalInputs& in, double slack) {
  TimeAverageCheck c;
  c.bound = average_enstrophy_bound(in);
  if (records.size() < 2) return c;
  const Constants k = constants(in);
  double integral = 0.0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double a = records[i - 1].norm_u_v, b = records[i].norm_u_v;
    integral += 0.5 * (a * a + b * b) * (records[i].t - records[i - 1].t);
  }
  c.t = records.back().t - records.front().t;
  if (c.t <= 0.0) return c;
  c.average = integral / c.t;
  c.transient = std::max(0.0, records.front().E2 - c.bound) / k.delta_prime;
  c.passed = c.average <= (c.bound + c.transient / c.t) * (1.0 + slack);
  return c;
}

}  // namespace bardina
