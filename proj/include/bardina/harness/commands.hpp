#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bardina/harness/checks.hpp"
#include "bardina/harness/config.hpp"

namespace bardina::harness {

/// Exit codes shared by every command.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  // a verification or envelope check failed
  kBadInput = 2,     // configuration, snapshot or usage error
  kRunFailed = 3,    // divergence or degenerate tangent ensemble
};

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> resume;
  std::optional<unsigned> threads;  // overrides the config; never changes results
  std::optional<std::uint64_t> seed;
  std::ostream* log = nullptr;  // progress and tables; defaults to std::cout
  /// Test hook for selftest: evaluate the identities with a broken convention.
  TrilinearFault fault = TrilinearFault::none;
};

inline constexpr const char* kDiagnosticsFile = "diagnostics.csv";
inline constexpr const char* kSnapshotFile = "final.snapshot";
inline constexpr const char* kLyapunovCsv = "lyapunov.csv";
inline constexpr const char* kLyapunovJson = "lyapunov.json";
inline constexpr const char* kBoundsJson = "bounds.json";
inline constexpr const char* kSweepCsv = "bounds_sweep.csv";
inline constexpr const char* kVerifyJson = "verify.json";

/// Formats a double with 17 significant digits.
std::string format_double(double x);

/// Writes diagnostics CSV and the final snapshot.
int cmd_simulate(const RunSpec& spec, const CommandOptions& options);
/// Writes the exponent CSV and the report JSON.
int cmd_lyapunov(const RunSpec& spec, const CommandOptions& options);
/// Writes the bounds JSON, plus the sweep CSV when the spec has a sweep.
int cmd_bounds(const RunSpec& spec, const CommandOptions& options);
/// Identity suite, transforms, tangent consistency and an envelope check of
/// the diagnostics in out_dir (or of a fresh run if there are none).
int cmd_verify(const RunSpec& spec, const CommandOptions& options);
/// The same checks on built-in sphere and torus configurations.
int cmd_selftest(const CommandOptions& options);

/// Checks used by verify and selftest, exposed for tests.
std::vector<CheckRow> standard_checks(const BasisPlan& plan, const ModelParams& params,
                                      std::uint64_t seed, TrilinearFault fault);

}  // namespace bardina::harness
