#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bardina/estimates.hpp"

namespace bardina::harness {

struct CheckRow {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// Largest relative coefficient error of analyze(synthesize(c)) over a few
/// seeded full-band coefficient vectors.
double roundtrip_residual(const BasisPlan& plan, std::uint64_t seed, int draws = 3);

/// Largest relative gap between the quadrature of f^2 and the coefficient sum.
double parseval_residual(const BasisPlan& plan, std::uint64_t seed, int draws = 3);

/// Largest relative gap between a central difference of rhs_u and rhs_tangent
/// over seeded (u, U) pairs.
double tangent_fd_residual(const BasisPlan& plan, const ModelParams& params, std::uint64_t seed,
                           int samples = 20, double eps = 1e-6);

/// Relative deviation of |u(t)| from |u0| exp(-nu lambda t) for a single
/// eigenmode run with zero forcing, at every step of an IF-RK4 run.
double eigenmode_decay_error(const BasisPlan& plan, double nu, double alpha, double sigma,
                             std::size_t mode, double dt, double t_end);

void print_table(std::ostream& out, const std::vector<CheckRow>& rows);
bool all_passed(const std::vector<CheckRow>& rows);

}  // namespace bardina::harness
