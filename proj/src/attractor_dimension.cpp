#include "bardina/attractor_dimension.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "bardina/errors.hpp"
#include "bardina/parallel.hpp"

namespace bardina {

void validate_lyapunov(const BasisPlan& plan, const LyapunovConfig& config) {
  const auto dim = flat_size(plan);
  if (config.N < 1) throw ConfigError("lyapunov.N must be at least 1");
  if (static_cast<std::size_t>(config.N) > dim)
    throw ConfigError("lyapunov.N = " + std::to_string(config.N) + " exceeds the " +
                      std::to_string(dim) + " retained directions");
  if (!(config.t_transient >= 0.0)) throw ConfigError("lyapunov.t_transient must be non-negative");
  if (!(config.t_average > 0.0)) throw ConfigError("lyapunov.t_average must be positive");
  if (!(config.renorm_interval > 0.0)) throw ConfigError("lyapunov.renorm_interval must be positive");
  if (!(config.perturbation >= 0.0)) throw ConfigError("lyapunov.perturbation must be non-negative");
}

namespace {

void axpy(double a, const VelocityState& x, VelocityState& y) {
  for (std::size_t i = 0; i < y.psi.size(); ++i) y.psi[i] += a * x.psi[i];
  for (std::size_t j = 0; j < y.harmonic.size(); ++j) y.harmonic.values[j] += a * x.harmonic.values[j];
}

void scale(double a, VelocityState& y) {
  for (double& v : y.psi.values) v *= a;
  for (double& v : y.harmonic.values) v *= a;
}

}  // namespace

OrthonormalSet orthonormalize(const BasisPlan& plan, const std::vector<TangentState>& tangents,
                              double alpha) {
  OrthonormalSet out;
  out.vectors = tangents;
  out.scales.resize(tangents.size());
  for (std::size_t k = 0; k < out.vectors.size(); ++k) {
    auto& v = out.vectors[k];
    const double original = std::sqrt(std::max(0.0, inner_weighted(plan, v, v, alpha)));
    for (std::size_t j = 0; j < k; ++j) axpy(-inner_weighted(plan, out.vectors[j], v, alpha), out.vectors[j], v);
    const double r = std::sqrt(std::max(0.0, inner_weighted(plan, v, v, alpha)));
    if (!(r >= 1e-300) || !(r > 1e-12 * original))
      throw DegenerateEnsembleError("tangent " + std::to_string(k + 1) +
                                    " is linearly dependent on the previous ones");
    scale(1.0 / r, v);
    out.scales[k] = r;
  }
  return out;
}

double trace_qn(const BasisPlan& plan, const VelocityState& u, const std::vector<TangentState>& basis,
                const ModelParams& params) {
  double sum = 0.0;
  for (const auto& w : basis) sum += inner_weighted(plan, rhs_tangent(plan, w, u, params), w, params.alpha);
  return sum;
}

KaplanYorke kaplan_yorke(const std::vector<double>& exponents) {
  KaplanYorke ky;
  if (exponents.empty() || exponents.front() < 0.0) return ky;
  double sum = 0.0;
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    if (sum + exponents[j] < 0.0) {
      ky.dimension = static_cast<double>(j) + sum / std::abs(exponents[j]);
      return ky;
    }
    sum += exponents[j];
  }
  ky.dimension = static_cast<double>(exponents.size());
  ky.lower_bound = true;
  return ky;
}

BoundVerdict compare_bound(const ExponentReport& report, std::optional<double> nstar) {
  BoundVerdict v;
  v.nstar = nstar;
  const auto& q = report.partial_sums;
  for (std::size_t n = 0; n < q.size(); ++n) {
    if (q[n] < 0.0) {
      v.crossing = static_cast<int>(n) + 1;
      break;
    }
  }
  if (!v.crossing) return v;
  bool negative_after = true;
  for (std::size_t n = static_cast<std::size_t>(*v.crossing) - 1; n < q.size(); ++n)
    negative_after = negative_after && q[n] < 0.0;
  const double limit = nstar ? std::max(1.0, std::ceil(*nstar)) : 0.0;
  v.consistent = nstar.has_value() && negative_after && *v.crossing <= limit;
  return v;
}

std::vector<TangentState> initial_tangents(const BasisPlan& plan, const LyapunovConfig& config,
                                           double alpha) {
  validate_lyapunov(plan, config);
  const std::size_t M = plan.mode_count(), H = plan.harmonic_dim();
  std::vector<TangentState> out;
  out.reserve(config.N);
  for (int k = 0; k < config.N; ++k) {
    TangentState w = zero_state(plan);
    const std::size_t idx = static_cast<std::size_t>(k);
    if (idx < H)
      w.harmonic.values[idx] = 1.0;
    else
      w.psi[idx - H] = 1.0;
    scale(1.0 / std::sqrt(inner_weighted(plan, w, w, alpha)), w);
    out.push_back(std::move(w));
  }
  if (config.perturbation > 0.0) {
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss;
    const auto lam = plan.eigenvalues();
    const double a2 = alpha * alpha;
    const double dim = static_cast<double>(M + H);
    for (auto& w : out) {
      // Each component gets unit weighted size, so the whole perturbation has
      // weighted norm about config.perturbation.
      const double amp = config.perturbation / std::sqrt(dim);
      for (std::size_t i = 0; i < M; ++i)
        w.psi[i] += amp * gauss(rng) / std::sqrt(lam[i] * (1.0 + a2 * lam[i]));
      for (std::size_t j = 0; j < H; ++j) w.harmonic.values[j] += amp * gauss(rng) / std::sqrt(plan.area());
    }
  }
  return orthonormalize(plan, out, alpha).vectors;
}

ExponentReport benettin_run(const BasisPlan& plan, const VelocityState& u0, const ModelParams& params,
                            const SchemeConfig& scheme, const LyapunovConfig& config,
                            const TangentObserver& observer) {
  validate_params(plan, params);
  validate_scheme(scheme);
  validate_lyapunov(plan, config);
  check_state(plan, u0);

  VelocityState u = u0;
  if (config.t_transient > 0.0) {
    SchemeConfig warm = scheme;
    warm.t_end = config.t_transient;
    warm.stride = 1 << 30;
    RunOptions opts;
    opts.keep_states = false;
    u = run(plan, u0, params, warm, {}, opts).final_state;
  }

  const std::size_t N = static_cast<std::size_t>(config.N);
  const std::size_t m = flat_size(plan);
  auto basis = initial_tangents(plan, config, params.alpha);

  const auto base_rates = linear_rates(plan, params);
  std::vector<double> rates;
  rates.reserve(m * (N + 1));
  for (std::size_t k = 0; k <= N; ++k) rates.insert(rates.end(), base_rates.begin(), base_rates.end());
  const IFStepper stepper(rates, scheme.scheme, scheme.dt);

  NonstiffFn g = [&](const std::vector<double>& y, std::vector<double>& out) {
    out.resize(y.size());
    const VelocityState uu = from_flat(plan, y.data());
    const auto bg = background_fields(plan, uu);
    const auto du = to_flat(rhs_u_nonstiff(plan, uu, bg, params));
    std::copy(du.begin(), du.end(), out.begin());
    parallel_for(N, config.threads, [&](std::size_t k) {
      const TangentState U = from_flat(plan, y.data() + (k + 1) * m);
      const auto dU = to_flat(rhs_tangent_nonstiff(plan, U, bg, params));
      std::copy(dU.begin(), dU.end(), out.begin() + static_cast<std::ptrdiff_t>((k + 1) * m));
    });
  };

  std::vector<double> y(m * (N + 1));
  auto pack = [&] {
    const auto fu = to_flat(u);
    std::copy(fu.begin(), fu.end(), y.begin());
    for (std::size_t k = 0; k < N; ++k) {
      const auto fw = to_flat(basis[k]);
      std::copy(fw.begin(), fw.end(), y.begin() + static_cast<std::ptrdiff_t>((k + 1) * m));
    }
  };
  pack();

  const long long total = static_cast<long long>(std::floor(config.t_average / scheme.dt + 1e-9));
  double remainder = config.t_average - static_cast<double>(total) * scheme.dt;
  if (remainder <= 1e-9 * scheme.dt) remainder = 0.0;
  const long long every = std::max(1LL, std::llround(config.renorm_interval / scheme.dt));

  ExponentReport report;
  std::vector<double> log_sum(N, 0.0);
  double t = 0.0;

  auto renormalize = [&] {
    for (double v : y)
      if (!std::isfinite(v)) throw DivergenceError(t, "non-finite state in tangent integration at t = " + std::to_string(t));
    u = from_flat(plan, y.data());
    std::vector<TangentState> raw;
    raw.reserve(N);
    for (std::size_t k = 0; k < N; ++k) raw.push_back(from_flat(plan, y.data() + (k + 1) * m));
    auto ortho = orthonormalize(plan, raw, params.alpha);
    basis = std::move(ortho.vectors);
    for (std::size_t k = 0; k < N; ++k) log_sum[k] += std::log(ortho.scales[k]);
    std::vector<double> mu(N);
    for (std::size_t k = 0; k < N; ++k) mu[k] = log_sum[k] / t;
    std::sort(mu.begin(), mu.end(), std::greater<>());
    std::vector<double> q(N);
    double s = 0.0;
    for (std::size_t k = 0; k < N; ++k) q[k] = (s += mu[k]);
    report.series_t.push_back(t);
    report.series_mu.push_back(std::move(mu));
    report.series_q.push_back(std::move(q));
    if (observer) observer(t, u, basis);
    pack();
  };

  for (long long k = 1; k <= total; ++k) {
    stepper.step(y, g);
    t = static_cast<double>(k) * scheme.dt;
    if (k % every == 0 || (k == total && remainder <= 0.0)) renormalize();
  }
  if (remainder > 0.0) {
    stepper.step(y, g, remainder);
    t = config.t_average;
    renormalize();
  }

  report.t_average = t;
  report.exponents = report.series_mu.back();
  report.partial_sums = report.series_q.back();
  report.kaplan_yorke = kaplan_yorke(report.exponents);
  report.verdict = compare_bound(report, std::nullopt);
  return report;
}

}  // namespace bardina
