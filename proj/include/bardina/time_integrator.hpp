#pragma once

// Integrating-factor time stepping. The linear part of every component is
// the diagonal decay -rate_i y_i (rate = nu lambda for streamfunction modes,
// 0 for harmonic components) and is propagated exactly; the remainder G(y)
// is stepped explicitly.

#include <functional>
#include <vector>

#include "bardina/dynamics.hpp"

namespace bardina {

enum class Scheme { if_euler, if_rk4 };

struct SchemeConfig {
  Scheme scheme = Scheme::if_rk4;
  double dt = 1e-3;
  double t_end = 1.0;
  int stride = 1;
};

void validate_scheme(const SchemeConfig& config);

/// Explicit part G(y) -> out, on flat vectors.
using NonstiffFn = std::function<void(const std::vector<double>& y, std::vector<double>& out)>;

/// Steps y' = -rates .* y + G(y) with precomputed exponentials for one dt.
class IFStepper {
 public:
  IFStepper(std::vector<double> rates, Scheme scheme, double dt);

  void step(std::vector<double>& y, const NonstiffFn& g) const;
  /// One step of a different length (used for a shortened final step).
  void step(std::vector<double>& y, const NonstiffFn& g, double h) const;

  double dt() const { return dt_; }
  Scheme scheme() const { return scheme_; }

 private:
  void step_with(std::vector<double>& y, const NonstiffFn& g, double h, const std::vector<double>& e_full,
                 const std::vector<double>& e_half) const;

  std::vector<double> rates_;
  Scheme scheme_;
  double dt_;
  std::vector<double> e_full_, e_half_;
};

/// Linear decay rates of the flat state layout (psi then harmonic).
std::vector<double> linear_rates(const BasisPlan& plan, const ModelParams& params);

/// One step of the u-form dynamics. Throws DivergenceError(t + dt) on a
/// non-finite result.
VelocityState step(const BasisPlan& plan, const VelocityState& state, const ModelParams& params,
                   Scheme scheme, double dt, double t = 0.0);

struct Trajectory {
  std::vector<double> times;
  std::vector<VelocityState> states;
  VelocityState final_state;
  double final_time = 0.0;
};

/// Called at t0, at every step whose global index is a multiple of the
/// stride, and at the final time.
using Observer = std::function<void(double t, const VelocityState& state)>;

struct RunOptions {
  double t0 = 0.0;
  bool keep_states = true;
};

/// Integrates from t0 to config.t_end. Step k ends at time (K0 + k) dt with
/// K0 = round(t0 / dt); a remainder shorter than dt is taken as one final
/// short step.
Trajectory run(const BasisPlan& plan, const VelocityState& state0, const ModelParams& params,
               const SchemeConfig& config, const Observer& observer = {}, RunOptions options = {});

/// Conservative explicit step size: an advective CFL number of 0.5 based on
/// max |u| on the grid and the largest resolved wavenumber, capped by the
/// drag time scale.
double suggest_dt(const BasisPlan& plan, const VelocityState& state, const ModelParams& params);

}  // namespace bardina
