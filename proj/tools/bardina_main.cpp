#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "bardina/errors.hpp"
#include "bardina/harness/commands.hpp"

using namespace bardina;
using namespace bardina::harness;

int main(int argc, char** argv) {
  CLI::App app{"Spectral-Galerkin simulator for the simplified Bardina model on the sphere and torus"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", resume_path, fault;
  unsigned threads = 0;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config_path, "JSON run configuration");
    if (needs_config) c->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (speed only)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed overriding the configuration");
  };

  auto* simulate = app.add_subcommand("simulate", "integrate and write diagnostics and a snapshot");
  add_common(simulate, true);
  simulate->add_option("--resume", resume_path, "continue from a snapshot");
  auto* lyapunov = app.add_subcommand("lyapunov", "Lyapunov exponents and the dimension verdict");
  add_common(lyapunov, true);
  lyapunov->add_option("--resume", resume_path, "start from a snapshot");
  auto* bounds = app.add_subcommand("bounds", "closed-form constants, radii and dimension bounds");
  add_common(bounds, true);
  auto* verify = app.add_subcommand("verify", "identity, transform and envelope checks");
  add_common(verify, true);
  auto* selftest = app.add_subcommand("selftest", "built-in checks at truncation 21");
  add_common(selftest, false);
  selftest->add_option("--fault", fault, "break a convention on purpose")
      ->check(CLI::IsMember({"flip_first_term"}))
      ->group("");

  CLI11_PARSE(app, argc, argv);

  CommandOptions opt;
  opt.out_dir = out_dir;
  if (!resume_path.empty()) opt.resume = resume_path;
  if (threads > 0) opt.threads = threads;
  for (auto* sub : {simulate, lyapunov, bounds, verify, selftest})
    if (sub->parsed() && sub->count("--seed") > 0) opt.seed = seed;
  if (fault == "flip_first_term") opt.fault = TrilinearFault::flip_first_term;

  try {
    if (selftest->parsed()) return cmd_selftest(opt);
    const RunSpec spec = load_config(config_path, opt.seed);
    if (simulate->parsed()) return cmd_simulate(spec, opt);
    if (lyapunov->parsed()) return cmd_lyapunov(spec, opt);
    if (bounds->parsed()) return cmd_bounds(spec, opt);
    if (verify->parsed()) return cmd_verify(spec, opt);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kBadInput;
  } catch (const CorruptSnapshotError& e) {
    std::cerr << "corrupt snapshot: " << e.what() << '\n';
    return kBadInput;
  } catch (const SnapshotMismatchError& e) {
    std::cerr << "snapshot mismatch: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRunFailed;
  }
  return kBadInput;
}
