#include "bardina/time_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bardina/errors.hpp"

namespace bardina {

void validate_scheme(const SchemeConfig& config) {
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) throw ConfigError("dt must be positive");
  if (!(config.t_end >= 0.0) || !std::isfinite(config.t_end)) throw ConfigError("T must be non-negative");
  if (config.stride < 1) throw ConfigError("stride must be at least 1");
}

namespace {

std::vector<double> exponentials(const std::vector<double>& rates, double h) {
  std::vector<double> e(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) e[i] = std::exp(-rates[i] * h);
  return e;
}

bool all_finite(const std::vector<double>& y) {
  return std::all_of(y.begin(), y.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

IFStepper::IFStepper(std::vector<double> rates, Scheme scheme, double dt)
    : rates_(std::move(rates)), scheme_(scheme), dt_(dt) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  e_full_ = exponentials(rates_, dt);
  e_half_ = exponentials(rates_, 0.5 * dt);
}

void IFStepper::step(std::vector<double>& y, const NonstiffFn& g) const {
  step_with(y, g, dt_, e_full_, e_half_);
}

void IFStepper::step(std::vector<double>& y, const NonstiffFn& g, double h) const {
  if (h == dt_) {
    step_with(y, g, dt_, e_full_, e_half_);
    return;
  }
  step_with(y, g, h, exponentials(rates_, h), exponentials(rates_, 0.5 * h));
}

void IFStepper::step_with(std::vector<double>& y, const NonstiffFn& g, double h,
                          const std::vector<double>& E, const std::vector<double>& Eh) const {
  const std::size_t n = y.size();
  if (n != rates_.size()) throw ShapeError("state size does not match the stepper");
  std::vector<double> k1(n);
  g(y, k1);
  if (scheme_ == Scheme::if_euler) {
    for (std::size_t i = 0; i < n; ++i) y[i] = E[i] * (y[i] + h * k1[i]);
    return;
  }
  // Lawson RK4 on w = e^{rate t} y.
  std::vector<double> tmp(n), k2(n), k3(n), k4(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = Eh[i] * (y[i] + 0.5 * h * k1[i]);
  g(tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = Eh[i] * y[i] + 0.5 * h * k2[i];
  g(tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = E[i] * y[i] + h * Eh[i] * k3[i];
  g(tmp, k4);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = E[i] * y[i] + h / 6.0 * (E[i] * k1[i] + 2.0 * Eh[i] * (k2[i] + k3[i]) + k4[i]);
}

std::vector<double> linear_rates(const BasisPlan& plan, const ModelParams& params) {
  std::vector<double> r(flat_size(plan), 0.0);
  const auto lam = plan.eigenvalues();
  for (std::size_t i = 0; i < lam.size(); ++i) r[i] = params.nu * lam[i];
  return r;
}

namespace {

NonstiffFn u_nonstiff(const BasisPlan& plan, const ModelParams& params) {
  return [&plan, &params](const std::vector<double>& y, std::vector<double>& out) {
    out = to_flat(rhs_u_nonstiff(plan, from_flat(plan, y.data()), params));
  };
}

void check_finite(const std::vector<double>& y, double t) {
  if (!all_finite(y)) {
    std::ostringstream os;
    os << "non-finite state at t = " << t;
    throw DivergenceError(t, os.str());
  }
}

}  // namespace

VelocityState step(const BasisPlan& plan, const VelocityState& state, const ModelParams& params,
                   Scheme scheme, double dt, double t) {
  check_state(plan, state);
  IFStepper stepper(linear_rates(plan, params), scheme, dt);
  auto y = to_flat(state);
  stepper.step(y, u_nonstiff(plan, params));
  check_finite(y, t + dt);
  return from_flat(plan, y.data());
}

Trajectory run(const BasisPlan& plan, const VelocityState& state0, const ModelParams& params,
               const SchemeConfig& config, const Observer& observer, RunOptions options) {
  validate_scheme(config);
  check_state(plan, state0);
  const double dt = config.dt;
  const long long k0 = std::llround(options.t0 / dt);
  const double t_start = static_cast<double>(k0) * dt;

  Trajectory traj;
  auto record = [&](double t, const std::vector<double>& y) {
    if (!observer && !options.keep_states) return;
    VelocityState s = from_flat(plan, y.data());
    if (observer) observer(t, s);
    if (options.keep_states) {
      traj.times.push_back(t);
      traj.states.push_back(std::move(s));
    }
  };

  std::vector<double> y = to_flat(state0);
  record(t_start, y);

  IFStepper stepper(linear_rates(plan, params), config.scheme, dt);
  const auto g = u_nonstiff(plan, params);
  const double span = config.t_end - t_start;
  const long long n_full = span > 0.0 ? static_cast<long long>(std::floor(span / dt + 1e-9)) : 0;
  double t = t_start;
  for (long long k = 1; k <= n_full; ++k) {
    stepper.step(y, g);
    const long long global = k0 + k;
    t = static_cast<double>(global) * dt;
    check_finite(y, t);
    const bool last = k == n_full && config.t_end - t <= 1e-9 * dt;
    if (global % config.stride == 0 || last) record(last ? std::max(t, config.t_end) : t, y);
  }
  const double rest = config.t_end - t;
  if (rest > 1e-9 * dt) {
    stepper.step(y, g, rest);
    t = config.t_end;
    check_finite(y, t);
    record(t, y);
  }
  traj.final_state = from_flat(plan, y.data());
  traj.final_time = t;
  return traj;
}

double suggest_dt(const BasisPlan& plan, const VelocityState& state, const ModelParams& params) {
  const auto u = velocity_grid(plan, state);
  double umax = 0.0;
  for (std::size_t q = 0; q < u.e1.values.size(); ++q)
    umax = std::max(umax, std::hypot(u.e1.values[q], u.e2.values[q]));
  const auto lam = plan.eigenvalues();
  const double kmax = std::sqrt(lam.back());
  double dt = 0.1;
  if (umax > 0.0) dt = std::min(dt, 0.5 / (umax * kmax));
  if (params.sigma > 0.0) dt = std::min(dt, 0.5 / params.sigma);
  return dt;
}

}  // namespace bardina
