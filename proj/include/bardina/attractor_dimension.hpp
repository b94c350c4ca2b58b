#pragma once

// Lyapunov exponents of the Galerkin system by tangent-ensemble QR, measured
// in the weighted product [u, w] = alpha^2 <curl u, curl w> + <u, w>.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bardina/time_integrator.hpp"

namespace bardina {

struct LyapunovConfig {
  int N = 1;
  double t_transient = 0.0;
  double t_average = 1.0;
  double renorm_interval = 0.1;
  std::uint64_t seed = 0;
  /// Size of the seeded perturbation added to each initial direction.
  double perturbation = 1e-3;
  /// Worker threads for tangent evaluations. Never changes results.
  unsigned threads = 1;
};

/// Throws ConfigError on N < 1, N above the flat dimension, t_transient < 0,
/// t_average <= 0 or renorm_interval <= 0.
void validate_lyapunov(const BasisPlan& plan, const LyapunovConfig& config);

struct OrthonormalSet {
  std::vector<TangentState> vectors;
  std::vector<double> scales;  // r_1 .. r_N
};

/// Modified Gram-Schmidt in inner_weighted. Throws DegenerateEnsembleError
/// when a scale factor is below 1e-300 or below 1e-12 of the vector's norm
/// before projection.
OrthonormalSet orthonormalize(const BasisPlan& plan, const std::vector<TangentState>& tangents,
                              double alpha);

/// Sum of [F'(u) w_k, w_k] over the set, with F' the full tangent tendency.
double trace_qn(const BasisPlan& plan, const VelocityState& u, const std::vector<TangentState>& basis,
                const ModelParams& params);

struct KaplanYorke {
  double dimension = 0.0;
  /// Every partial sum was non-negative; dimension is then only a lower bound.
  bool lower_bound = false;
};

/// Exponents must be sorted descending.
KaplanYorke kaplan_yorke(const std::vector<double>& exponents);

struct BoundVerdict {
  std::optional<int> crossing;  // first N with q_N < 0
  std::optional<double> nstar;
  bool consistent = false;      // crossing <= max(1, ceil(nstar)) and q_N < 0 beyond it
};

struct ExponentReport {
  std::vector<double> exponents;     // descending
  std::vector<double> partial_sums;  // q_1 .. q_N
  std::vector<double> series_t;      // renormalization times after the transient
  std::vector<std::vector<double>> series_mu;  // running exponents, sorted per row
  std::vector<std::vector<double>> series_q;
  KaplanYorke kaplan_yorke;
  BoundVerdict verdict;
  double t_average = 0.0;
};

/// Called after every renormalization with the orthonormal ensemble.
using TangentObserver =
    std::function<void(double t, const VelocityState& u, const std::vector<TangentState>& basis)>;

/// Initial ensemble: harmonic directions first on the torus, then eigenmodes
/// in plan order, each with a seeded perturbation, orthonormalized.
std::vector<TangentState> initial_tangents(const BasisPlan& plan, const LyapunovConfig& config,
                                           double alpha);

/// Integrates u alone over t_transient, then u with N tangents over
/// t_average at step scheme.dt, renormalizing every renorm_interval and at
/// the end. The verdict is left without N*; see compare_bound.
ExponentReport benettin_run(const BasisPlan& plan, const VelocityState& u0, const ModelParams& params,
                            const SchemeConfig& scheme, const LyapunovConfig& config,
                            const TangentObserver& observer = {});

BoundVerdict compare_bound(const ExponentReport& report, std::optional<double> nstar);

}  // namespace bardina
