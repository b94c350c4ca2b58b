#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bardina/attractor_dimension.hpp"

namespace bardina::harness {

struct ModeAmplitude {
  SpectralIndex index;
  double amplitude = 0.0;
};

struct InitialSpec {
  enum class Kind { zero, eigenmode, random };
  Kind kind = Kind::zero;
  SpectralIndex index;  // eigenmode
  double amplitude = 1.0;
  std::optional<std::uint64_t> seed;  // random
  double slope = 2.0;
  std::optional<double> energy;  // random: rescale to this E1
};

struct LyapunovSpec {
  LyapunovConfig config;
  std::optional<std::uint64_t> seed;
};

struct BoundsSpec {
  int n_max = 5;
  double c = 1.0;
  std::optional<double> domain_area;
};

/// Cartesian product of parameter lists; an empty list means the base value.
struct SweepSpec {
  std::vector<double> nu;
  std::vector<double> alpha;
  std::vector<double> sigma;
  std::vector<double> forcing_scale;
};

struct RunSpec {
  Geometry geometry;
  int truncation = 0;
  double nu = 1.0;
  double alpha = 1.0;
  double sigma = 0.0;
  std::vector<ModeAmplitude> forcing;
  std::array<double, 2> f2{0.0, 0.0};
  InitialSpec initial;
  SchemeConfig scheme;
  std::optional<std::uint64_t> seed;
  std::optional<LyapunovSpec> lyapunov;
  BoundsSpec bounds;
  std::optional<SweepSpec> sweep;
  unsigned threads = 1;
};

/// Parses and validates a JSON run configuration. Throws ConfigError with the
/// offending key path in the message. A seed given on the command line
/// satisfies the requirement that random elements have a seed.
RunSpec parse_config(const std::string& text, std::optional<std::uint64_t> seed_override = std::nullopt);
RunSpec load_config(const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt);

/// The plan the spec describes.
BasisPlan make_plan(const RunSpec& spec);

ModelParams model_params(const BasisPlan& plan, const RunSpec& spec);

/// Seed for a block: an explicit override wins, then the block's own seed,
/// then the top-level seed; offset separates the streams of different blocks
/// drawn from the same top-level seed.
std::optional<std::uint64_t> resolve_seed(const RunSpec& spec, std::optional<std::uint64_t> block,
                                          std::optional<std::uint64_t> override_seed,
                                          std::uint64_t offset);

VelocityState initial_state(const BasisPlan& plan, const RunSpec& spec,
                            std::optional<std::uint64_t> override_seed = std::nullopt);

LyapunovConfig lyapunov_config(const RunSpec& spec, std::optional<std::uint64_t> override_seed,
                               unsigned threads);

}  // namespace bardina::harness
