#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bardina/errors.hpp"
#include "bardina/harness/commands.hpp"
#include "bardina/harness/snapshot.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace bardina;
using namespace bardina::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bardina_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal sphere config takes defaults") {
  const auto spec = parse_config(R"({"geometry":"sphere","Lmax":10,"nu":0.1,"alpha":0.5,"dt":0.01,"T":2})");
  CHECK(spec.geometry.is_sphere());
  CHECK(spec.truncation == 10);
  CHECK(spec.sigma == 0.0);
  CHECK(spec.scheme.scheme == Scheme::if_rk4);
  CHECK(spec.scheme.stride == 1);
  CHECK(spec.initial.kind == InitialSpec::Kind::zero);
  CHECK(spec.forcing.empty());
  CHECK_FALSE(spec.lyapunov);
  CHECK(spec.bounds.n_max == 5);
  CHECK(spec.bounds.c == 1.0);
}

TEST_CASE("config errors name the key") {
  CHECK(message_of(R"({"geometry":"torus","Kmax":8,"nu":1,"alpha":1})").find("sigma") != std::string::npos);
  CHECK(message_of(R"({"geometry":"sphere","Lmax":4,"nu":1,"alpha":1,"bogus":1})").find("bogus") !=
        std::string::npos);
  const auto m = message_of(
      R"({"geometry":"sphere","Lmax":4,"nu":1,"alpha":1,"forcing":{"modes":[{"index":[7,0],"amplitude":1}]}})");
  CHECK(m.find("forcing.modes[0].index") != std::string::npos);
  CHECK(message_of(R"({"geometry":"sphere","Lmax":4,"nu":-1,"alpha":1})").find("nu") != std::string::npos);
  CHECK(message_of(R"({"geometry":"sphere","Lmax":4,"nu":1)").find("malformed") != std::string::npos);
  CHECK(message_of(R"({"geometry":"sphere","Lmax":4,"nu":1,"alpha":1,"initial":{"type":"random"}})")
            .find("seed") != std::string::npos);
  CHECK(message_of(R"({"geometry":"sphere","Lmax":2,"nu":1,"alpha":1,"seed":1,
                       "lyapunov":{"N":9,"t_average":1,"renorm_interval":0.1}})")
            .find("lyapunov.N") != std::string::npos);
  CHECK(message_of(R"({"geometry":"sphere","Lmax":4,"nu":1,"alpha":1,"initial":{"type":"zero","x":1}})")
            .find("initial.x") != std::string::npos);
}

TEST_CASE("seeds resolve with overrides first") {
  auto spec = parse_config(
      R"({"geometry":"sphere","Lmax":6,"nu":1,"alpha":1,"seed":10,"initial":{"type":"random","energy":2.0}})");
  CHECK(resolve_seed(spec, std::nullopt, std::nullopt, 1) == 11u);
  CHECK(resolve_seed(spec, 5u, std::nullopt, 1) == 5u);
  CHECK(resolve_seed(spec, 5u, 20u, 1) == 21u);
  const auto plan = make_plan(spec);
  const auto u = initial_state(plan, spec);
  CHECK(inner_l2(plan, u, u) + inner_v(plan, u, u) == doctest::Approx(2.0));
  CHECK(initial_state(plan, spec).psi.values == u.psi.values);
  CHECK(initial_state(plan, spec, 99u).psi.values != u.psi.values);
  CHECK_NOTHROW(parse_config(R"({"geometry":"sphere","Lmax":4,"nu":1,"alpha":1,"initial":{"type":"random"}})", 3u));
}

TEST_CASE("forcing and eigenmode initial data land on the right coefficients") {
  const auto spec = parse_config(R"({"geometry":"torus","Kmax":6,"L":3.0,"nu":1,"alpha":1,"sigma":0.5,
      "forcing":{"modes":[{"index":[1,2],"amplitude":0.5},{"index":[-1,0],"amplitude":2}],"f2":[0.1,0.2]},
      "initial":{"type":"eigenmode","index":[2,-1],"amplitude":3}})");
  const auto plan = make_plan(spec);
  const auto p = model_params(plan, spec);
  CHECK(p.forcing.f1_curl[plan.position({1, 2})] == 0.5);
  CHECK(p.forcing.f1_curl[plan.position({-1, 0})] == 2.0);
  CHECK(p.forcing.f2.values == std::vector<double>{0.1, 0.2});
  const auto u = initial_state(plan, spec);
  CHECK(u.psi[plan.position({2, -1})] == 3.0);
  CHECK(plan.geometry().length == 3.0);
}

TEST_CASE("snapshot roundtrip and corruption") {
  auto plan = build_plan(Geometry::torus(2.0 * std::numbers::pi), 6);
  Snapshot s;
  s.geometry = GeometryKind::torus;
  s.truncation = 6;
  s.t = 1.25;
  s.nu = 0.1;
  s.alpha = 0.2;
  s.sigma = 0.3;
  s.state = random_state(plan, 4);
  const auto bytes = encode_snapshot(s);
  CHECK(bytes.substr(0, 4) == "BDNA");
  const auto back = decode_snapshot(bytes);
  CHECK(back.state.psi.values == s.state.psi.values);
  CHECK(back.state.harmonic.values == s.state.harmonic.values);
  CHECK(back.t == s.t);
  CHECK(back.sigma == s.sigma);
  CHECK_NOTHROW(check_snapshot(back, plan));

  CHECK_THROWS_AS(decode_snapshot(bytes.substr(0, bytes.size() - 9)), CorruptSnapshotError);
  auto flipped = bytes;
  flipped[60] ^= 0x01;
  CHECK_THROWS_AS(decode_snapshot(flipped), CorruptSnapshotError);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(decode_snapshot(bad_magic), CorruptSnapshotError);
  auto bad_version = bytes;
  bad_version[4] = 2;
  CHECK_THROWS_AS(decode_snapshot(bad_version), CorruptSnapshotError);

  CHECK_THROWS_AS(check_snapshot(back, build_plan(Geometry::torus(2.0 * std::numbers::pi), 7)),
                  SnapshotMismatchError);
  CHECK_THROWS_AS(check_snapshot(back, build_plan(Geometry::sphere(), 6)), SnapshotMismatchError);

  const auto dir = scratch("snap");
  save_snapshot((dir / "x.snapshot").string(), s);
  CHECK(load_snapshot((dir / "x.snapshot").string()).state.psi.values == s.state.psi.values);
}

TEST_CASE("simulate writes diagnostics and honours zero-length runs") {
  std::ostringstream log;
  CommandOptions opt;
  opt.log = &log;
  opt.out_dir = scratch("sim_decay");
  const auto spec = parse_config(R"({"geometry":"sphere","Lmax":8,"nu":1,"alpha":1,"dt":0.001,"T":1,
      "stride":100,"initial":{"type":"eigenmode","index":[2,1]}})");
  CHECK(cmd_simulate(spec, opt) == kOk);
  std::ifstream csv(opt.out_dir / kDiagnosticsFile);
  std::string line;
  std::getline(csv, line);
  CHECK(line.rfind("t,norm_u_l2,norm_u_v,norm_Au,norm_u2,norm_v,E1,E2,env1,env2,energy_residual,violations", 0) == 0);
  double first = 0.0;
  int rows = 0;
  while (std::getline(csv, line)) {
    std::stringstream ss(line);
    std::string t, n;
    std::getline(ss, t, ',');
    std::getline(ss, n, ',');
    const double tv = std::stod(t), nv = std::stod(n);
    if (rows == 0) first = nv;
    CHECK(std::abs(nv - first * std::exp(-6.0 * tv)) <= 1e-8 * first * std::exp(-6.0 * tv));
    ++rows;
  }
  CHECK(rows == 11);
  CHECK(fs::exists(opt.out_dir / kSnapshotFile));

  auto zero = spec;
  zero.scheme.t_end = 0.0;
  opt.out_dir = scratch("sim_zero");
  CHECK(cmd_simulate(zero, opt) == kOk);
  const auto text = slurp(opt.out_dir / kDiagnosticsFile);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  CHECK(load_snapshot((opt.out_dir / kSnapshotFile).string()).t == 0.0);
}

TEST_CASE("resumed simulation matches the unbroken run") {
  std::ostringstream log;
  CommandOptions opt;
  opt.log = &log;
  const auto spec = parse_config(R"({"geometry":"torus","Kmax":8,"nu":0.05,"alpha":0.5,"sigma":0.2,"dt":0.01,
      "T":1,"stride":5,"seed":2,"initial":{"type":"random"},"forcing":{"modes":[{"index":[2,1],"amplitude":1}]}})");
  opt.out_dir = scratch("resume_full");
  REQUIRE(cmd_simulate(spec, opt) == kOk);
  const auto full = load_snapshot((opt.out_dir / kSnapshotFile).string());

  auto half = spec;
  half.scheme.t_end = 0.5;
  opt.out_dir = scratch("resume_a");
  REQUIRE(cmd_simulate(half, opt) == kOk);
  CommandOptions resumed = opt;
  resumed.resume = opt.out_dir / kSnapshotFile;
  resumed.out_dir = scratch("resume_b");
  REQUIRE(cmd_simulate(spec, resumed) == kOk);
  const auto tail = load_snapshot((resumed.out_dir / kSnapshotFile).string());
  CHECK(tail.state.psi.values == full.state.psi.values);
  CHECK(tail.state.harmonic.values == full.state.harmonic.values);

  auto other = spec;
  other.nu = 0.06;
  CHECK_THROWS_AS(cmd_simulate(other, resumed), SnapshotMismatchError);
}

TEST_CASE("bounds command reports the torus example and the gap table") {
  std::ostringstream log;
  CommandOptions opt;
  opt.log = &log;
  opt.out_dir = scratch("bounds");
  // |f| = 1 with nu = 1 gives G = 1.
  const auto torus = parse_config(R"({"geometry":"torus","Kmax":4,"nu":1,"alpha":1,"sigma":0.1,
      "forcing":{"modes":[{"index":[1,0],"amplitude":1}]},"sweep":{"nu":[1,2],"alpha":[1]}})");
  CHECK(cmd_bounds(torus, opt) == kOk);
  const auto j = nlohmann::json::parse(slurp(opt.out_dir / kBoundsJson));
  CHECK(j.at("geometry_bound").get<double>() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(j.contains("exponent_note"));
  const auto sweep = slurp(opt.out_dir / kSweepCsv);
  CHECK(std::count(sweep.begin(), sweep.end(), '\n') == 3);

  opt.out_dir = scratch("bounds_sphere");
  const auto sphere = parse_config(R"({"geometry":"sphere","Lmax":4,"nu":1,"alpha":1})");
  CHECK(cmd_bounds(sphere, opt) == kOk);
  const auto s = nlohmann::json::parse(slurp(opt.out_dir / kBoundsJson));
  CHECK(s.at("inertial").at("gaps").get<std::vector<double>>() == std::vector<double>{4, 6, 8, 10, 12});
}

TEST_CASE("lyapunov command at the zero equilibrium") {
  std::ostringstream log;
  CommandOptions opt;
  opt.log = &log;
  opt.out_dir = scratch("lyap");
  const auto spec = parse_config(R"({"geometry":"sphere","Lmax":4,"nu":1,"alpha":1,"dt":0.01,"seed":1,
      "lyapunov":{"N":3,"t_average":5,"renorm_interval":0.5}})");
  CHECK(cmd_lyapunov(spec, opt) == kOk);
  const auto text = slurp(opt.out_dir / kLyapunovCsv);
  CHECK(text.rfind("t,mu_1,mu_2,mu_3,q_1,q_2,q_3\n", 0) == 0);
  const auto j = nlohmann::json::parse(slurp(opt.out_dir / kLyapunovJson));
  CHECK(j.at("verdict").at("consistent").get<bool>());
}

TEST_CASE("verify and selftest") {
  std::ostringstream log;
  CommandOptions opt;
  opt.log = &log;
  opt.out_dir = scratch("verify");
  const auto spec = parse_config(R"({"geometry":"sphere","Lmax":10,"nu":0.1,"alpha":0.5,"dt":0.01,"T":1,
      "seed":5,"initial":{"type":"random"},"forcing":{"modes":[{"index":[3,1],"amplitude":1}]}})");
  CHECK(cmd_verify(spec, opt) == kOk);
  REQUIRE(cmd_simulate(spec, opt) == kOk);
  CHECK(cmd_verify(spec, opt) == kOk);
  CHECK(log.str().find("diagnostics.csv") != std::string::npos);

  CommandOptions broken = opt;
  broken.fault = TrilinearFault::flip_first_term;
  CHECK(cmd_verify(spec, broken) == kCheckFailed);
}
