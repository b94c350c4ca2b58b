#include "bardina/harness/commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "bardina/errors.hpp"
#include "bardina/harness/snapshot.hpp"

namespace bardina::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ostream& log_of(const CommandOptions& o) { return o.log ? *o.log : std::cout; }

unsigned threads_of(const RunSpec& spec, const CommandOptions& o) {
  return std::max(1u, o.threads.value_or(spec.threads));
}

std::ofstream open_out(const CommandOptions& o, const char* name) {
  fs::create_directories(o.out_dir);
  const fs::path p = o.out_dir / name;
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

void write_json(const CommandOptions& o, const char* name, const json& j) {
  auto out = open_out(o, name);
  out << j.dump(2) << '\n';
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

const char* geometry_name(const Geometry& g) { return g.is_sphere() ? "sphere" : "torus"; }

void check_resume_params(const Snapshot& snap, const ModelParams& p) {
  if (snap.nu != p.nu || snap.alpha != p.alpha || snap.sigma != p.sigma)
    throw SnapshotMismatchError("snapshot parameters (nu, alpha, sigma) differ from the configuration");
}

struct StartState {
  VelocityState state;
  double t = 0.0;
};

StartState start_state(const BasisPlan& plan, const ModelParams& params, const RunSpec& spec,
                       const CommandOptions& o) {
  if (o.resume) {
    const Snapshot snap = load_snapshot(o.resume->string());
    check_snapshot(snap, plan);
    check_resume_params(snap, params);
    return {snap.state, snap.t};
  }
  return {initial_state(plan, spec, o.seed), 0.0};
}

const char* kDiagnosticsHeader =
    "t,norm_u_l2,norm_u_v,norm_Au,norm_u2,norm_v,E1,E2,env1,env2,energy_residual,violations";

void write_record(std::ostream& out, const DiagnosticsRecord& r) {
  const double cols[] = {r.t,  r.norm_u_l2, r.norm_u_v, r.norm_Au, r.norm_u2, r.norm_v,
                         r.E1, r.E2,        r.env1,     r.env2,    r.energy_residual};
  for (double c : cols) out << format_double(c) << ',';
  out << r.violations << '\n';
}

json inputs_json(const PhysicalInputs& in) {
  json j;
  j["geometry"] = geometry_name(in.geometry);
  if (in.geometry.is_torus()) j["L"] = in.geometry.length;
  j["nu"] = in.nu;
  j["alpha"] = in.alpha;
  j["sigma"] = in.sigma;
  j["forcing"] = {{"f1", in.forcing.f1},
                  {"f1_inv_half", in.forcing.f1_inv_half},
                  {"f1_inv", in.forcing.f1_inv},
                  {"f2", in.forcing.f2},
                  {"total", in.forcing.total}};
  return j;
}

json bounds_json(const BoundsReport& r) {
  json j;
  j["inputs"] = inputs_json(r.inputs);
  const auto& c = r.constants;
  j["constants"] = {{"lambda1", c.lambda1}, {"delta", c.delta},     {"delta_prime", c.delta_prime},
                    {"L1", c.L1},           {"L2", c.L2},           {"k1", c.k1},
                    {"k2", optional_number(c.k2)}, {"sphere_rates", c.sphere_rates}};
  const auto& ra = r.radii;
  j["radii"] = {{"rho0", ra.rho0}, {"rho1", ra.rho1}, {"rho1_tilde", ra.rho1_tilde}, {"rho2", ra.rho2},
                {"rho", ra.rho},   {"rho_half", ra.rho_half}, {"family", ra.family}};
  j["nstar"] = optional_number(r.nstar_generic);
  j["nstar_loose"] = optional_number(r.nstar_generic_loose);
  if (r.l2_over_delta)
    j["l2_over_delta_prime"] = {{"tight", r.l2_over_delta->tight}, {"loose", r.l2_over_delta->loose}};
  j["geometry_bound"] = r.geometry_bound;
  j["grashof"] = r.grashof;
  j["average_enstrophy_bound"] = r.average_enstrophy;
  if (r.inertial) {
    const auto& in = *r.inertial;
    j["inertial"] = {{"degrees", in.degrees},
                     {"gaps", in.gaps},
                     {"c", in.c},
                     {"rho", in.rho},
                     {"lipschitz", in.lipschitz},
                     {"threshold", in.threshold},
                     {"crossing", in.crossing ? json(*in.crossing) : json(nullptr)},
                     {"squeezing_rate", in.squeezing_rate}};
  }
  if (r.domain_area) {
    j["domain"] = {{"area", *r.domain_area}, {"bound", optional_number(r.domain_bound)}};
  }
  j["exponent_note"] = kExponentNote;
  return j;
}

BoundsReport report_for(const BasisPlan& plan, const ModelParams& params, const RunSpec& spec) {
  return bounds_report(physical_inputs(plan, params), spec.bounds.n_max, spec.bounds.c,
                       spec.bounds.domain_area);
}

std::vector<DiagnosticsRecord> read_diagnostics(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  std::map<std::string, std::size_t> col;
  {
    std::stringstream ss(line);
    std::string name;
    for (std::size_t i = 0; std::getline(ss, name, ','); ++i) col[name] = i;
  }
  for (const char* need : {"t", "norm_u_v", "E1", "E2", "energy_residual"})
    if (!col.count(need)) throw Error(path.string() + ": missing column " + need);
  std::vector<DiagnosticsRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
    if (v.size() < col.size()) throw Error(path.string() + ": short row");
    DiagnosticsRecord r;
    r.t = v[col["t"]];
    r.norm_u_v = v[col["norm_u_v"]];
    r.E1 = v[col["E1"]];
    r.E2 = v[col["E2"]];
    r.energy_residual = v[col["energy_residual"]];
    out.push_back(r);
  }
  return out;
}

std::vector<CheckRow> envelope_checks(std::vector<DiagnosticsRecord>& records, const PhysicalInputs& in,
                                      double dt, const std::string& prefix) {
  std::vector<CheckRow> rows;
  const auto report = apply_envelopes(records, in, envelope_slack(dt));
  const double n1 = static_cast<double>(report.e1_samples.size());
  const double n2 = static_cast<double>(report.e2_samples.size());
  rows.push_back({prefix + "E1 envelope violations", n1, 0.0, n1 == 0.0});
  rows.push_back({prefix + "E2 envelope violations", n2, 0.0, n2 == 0.0});
  double worst = 0.0;
  for (const auto& r : records) worst = std::max(worst, r.energy_residual);
  rows.push_back({prefix + "energy residual", worst, 1e-10, worst <= 1e-10});
  const auto avg = time_average_check(records, in);
  const double excess = avg.t > 0.0 ? avg.average - (avg.bound + avg.transient / avg.t) : 0.0;
  rows.push_back({prefix + "time-average enstrophy excess", excess, 0.0, avg.passed});
  return rows;
}

std::vector<DiagnosticsRecord> simulate_records(const BasisPlan& plan, const VelocityState& u0,
                                                const ModelParams& params, const SchemeConfig& scheme) {
  std::vector<DiagnosticsRecord> out;
  run(plan, u0, params, scheme,
      [&](double t, const VelocityState& s) { out.push_back(energy_record(plan, s, params, t)); },
      RunOptions{0.0, false});
  return out;
}

json rows_json(const std::vector<CheckRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"name", r.name}, {"value", r.value}, {"threshold", r.threshold}, {"passed", r.passed}});
  return arr;
}

}  // namespace

int cmd_simulate(const RunSpec& spec, const CommandOptions& o) {
  auto& log = log_of(o);
  const BasisPlan plan = make_plan(spec);
  const ModelParams params = model_params(plan, spec);
  validate_params(plan, params);
  const StartState start = start_state(plan, params, spec, o);

  auto csv = open_out(o, kDiagnosticsFile);
  csv << kDiagnosticsHeader << '\n';

  const auto in = physical_inputs(plan, params);
  const double slack = envelope_slack(spec.scheme.dt);
  bool have_first = false;
  double t_first = 0.0, E1_0 = 0.0, E2_0 = 0.0;
  std::size_t violations = 0;

  auto observer = [&](double t, const VelocityState& s) {
    auto r = energy_record(plan, s, params, t);
    if (!have_first) {
      have_first = true;
      t_first = t;
      E1_0 = r.E1;
      E2_0 = r.E2;
    }
    const auto env = gronwall_envelopes(E1_0, E2_0, t - t_first, in);
    r.env1 = env.env1;
    r.env2 = env.env2;
    if (r.E1 > r.env1 * (1.0 + slack)) r.violations |= 1;
    if (r.E2 > r.env2 * (1.0 + slack)) r.violations |= 2;
    if (r.violations) ++violations;
    write_record(csv, r);
  };

  const double dt = spec.scheme.dt;
  const double t_start = static_cast<double>(std::llround(start.t / dt)) * dt;
  VelocityState final_state = start.state;
  double final_time = start.t;
  if (spec.scheme.t_end - t_start > 1e-9 * dt) {
    try {
      const auto traj = run(plan, start.state, params, spec.scheme, observer, RunOptions{start.t, false});
      final_state = traj.final_state;
      final_time = traj.final_time;
    } catch (const DivergenceError& e) {
      csv.flush();
      log << "simulate: " << e.what() << '\n';
      return kRunFailed;
    }
  }
  csv.flush();

  Snapshot snap;
  snap.geometry = plan.geometry().kind;
  snap.truncation = plan.truncation();
  snap.t = final_time;
  snap.nu = params.nu;
  snap.alpha = params.alpha;
  snap.sigma = params.sigma;
  snap.state = final_state;
  save_snapshot((o.out_dir / kSnapshotFile).string(), snap);

  log << "simulate: reached t = " << format_double(final_time) << ", " << violations
      << " samples above their envelopes\n";
  return violations == 0 ? kOk : kCheckFailed;
}

int cmd_lyapunov(const RunSpec& spec, const CommandOptions& o) {
  auto& log = log_of(o);
  const BasisPlan plan = make_plan(spec);
  const ModelParams params = model_params(plan, spec);
  validate_params(plan, params);
  const LyapunovConfig cfg = lyapunov_config(spec, o.seed, threads_of(spec, o));
  const StartState start = start_state(plan, params, spec, o);

  ExponentReport report;
  try {
    report = benettin_run(plan, start.state, params, spec.scheme, cfg);
  } catch (const DegenerateEnsembleError& e) {
    log << "lyapunov: degenerate tangent ensemble: " << e.what() << '\n';
    return kRunFailed;
  } catch (const DivergenceError& e) {
    log << "lyapunov: " << e.what() << '\n';
    return kRunFailed;
  }
  const BoundsReport bounds = report_for(plan, params, spec);
  report.verdict = compare_bound(report, bounds.geometry_bound);

  const std::size_t N = report.exponents.size();
  auto csv = open_out(o, kLyapunovCsv);
  csv << 't';
  for (std::size_t i = 1; i <= N; ++i) csv << ",mu_" << i;
  for (std::size_t i = 1; i <= N; ++i) csv << ",q_" << i;
  csv << '\n';
  for (std::size_t k = 0; k < report.series_t.size(); ++k) {
    csv << format_double(report.series_t[k]);
    for (double x : report.series_mu[k]) csv << ',' << format_double(x);
    for (double x : report.series_q[k]) csv << ',' << format_double(x);
    csv << '\n';
  }

  json j;
  j["inputs"] = inputs_json(bounds.inputs);
  j["N"] = N;
  j["t_transient"] = cfg.t_transient;
  j["t_average"] = report.t_average;
  j["renorm_interval"] = cfg.renorm_interval;
  j["seed"] = cfg.seed;
  j["exponents"] = report.exponents;
  j["partial_sums"] = report.partial_sums;
  j["kaplan_yorke"] = {{"dimension", report.kaplan_yorke.dimension},
                       {"lower_bound", report.kaplan_yorke.lower_bound}};
  const auto& v = report.verdict;
  j["verdict"] = {{"crossing", v.crossing ? json(*v.crossing) : json(nullptr)},
                  {"nstar", optional_number(v.nstar)},
                  {"consistent", v.consistent}};
  j["exponent_note"] = kExponentNote;
  write_json(o, kLyapunovJson, j);

  log << "lyapunov: q_N crossing "
      << (v.crossing ? std::to_string(*v.crossing) : std::string("none")) << ", N* = "
      << format_double(bounds.geometry_bound) << (v.consistent ? " (consistent)" : " (not consistent)") << '\n';
  return kOk;
}

int cmd_bounds(const RunSpec& spec, const CommandOptions& o) {
  auto& log = log_of(o);
  const BasisPlan plan = make_plan(spec);
  const ModelParams params = model_params(plan, spec);
  validate_params(plan, params);
  const BoundsReport report = report_for(plan, params, spec);
  write_json(o, kBoundsJson, bounds_json(report));

  if (spec.sweep) {
    const auto& sw = *spec.sweep;
    auto or_base = [](const std::vector<double>& v, double base) {
      return v.empty() ? std::vector<double>{base} : v;
    };
    const auto base = physical_inputs(plan, params);
    auto csv = open_out(o, kSweepCsv);
    csv << "nu,alpha,sigma,forcing_scale,grashof,lambda1,delta,delta_prime,L1,L2,rho0,rho1,rho1_tilde,"
           "rho2,rho,nstar,nstar_loose,geometry_bound,average_enstrophy_bound\n";
    auto opt = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string(); };
    for (double nu : or_base(sw.nu, spec.nu))
      for (double alpha : or_base(sw.alpha, spec.alpha))
        for (double sigma : or_base(sw.sigma, spec.sigma))
          for (double scale : or_base(sw.forcing_scale, 1.0)) {
            PhysicalInputs in = base;
            in.nu = nu;
            in.alpha = alpha;
            in.sigma = sigma;
            in.forcing.f1 *= scale;
            in.forcing.f1_inv_half *= scale;
            in.forcing.f1_inv *= scale;
            in.forcing.f2 *= scale;
            in.forcing.total *= scale;
            const auto r = bounds_report(in, spec.bounds.n_max, spec.bounds.c, spec.bounds.domain_area);
            const auto& c = r.constants;
            const auto& ra = r.radii;
            csv << format_double(nu) << ',' << format_double(alpha) << ',' << format_double(sigma) << ','
                << format_double(scale) << ',' << format_double(r.grashof) << ',' << format_double(c.lambda1)
                << ',' << format_double(c.delta) << ',' << format_double(c.delta_prime) << ','
                << format_double(c.L1) << ',' << format_double(c.L2) << ',' << format_double(ra.rho0) << ','
                << format_double(ra.rho1) << ',' << format_double(ra.rho1_tilde) << ','
                << format_double(ra.rho2) << ',' << format_double(ra.rho) << ',' << opt(r.nstar_generic)
                << ',' << opt(r.nstar_generic_loose) << ',' << format_double(r.geometry_bound) << ','
                << format_double(r.average_enstrophy) << '\n';
          }
  }
  log << "bounds: G = " << format_double(report.grashof) << ", geometry bound "
      << format_double(report.geometry_bound) << '\n';
  log << "note: " << kExponentNote << '\n';
  return kOk;
}

std::vector<CheckRow> standard_checks(const BasisPlan& plan, const ModelParams& params,
                                      std::uint64_t seed, TrilinearFault fault) {
  std::vector<CheckRow> rows;
  const double rt = roundtrip_residual(plan, seed);
  rows.push_back({"transform roundtrip", rt, 1e-12, rt <= 1e-12});
  const double pv = parseval_residual(plan, seed + 1);
  rows.push_back({"Parseval", pv, 1e-12, pv <= 1e-12});
  IdentityOptions opt;
  opt.fault = fault;
  for (const auto& r : identity_suite(plan, params, seed + 2, opt))
    rows.push_back({r.name, r.max_residual, r.threshold, r.passed});
  const double fd = tangent_fd_residual(plan, params, seed + 1000);
  rows.push_back({"tangent consistency", fd, 1e-6, fd <= 1e-6});
  return rows;
}

int cmd_verify(const RunSpec& spec, const CommandOptions& o) {
  auto& log = log_of(o);
  const BasisPlan plan = make_plan(spec);
  const ModelParams params = model_params(plan, spec);
  validate_params(plan, params);
  const std::uint64_t seed = resolve_seed(spec, std::nullopt, o.seed, 2).value_or(0);
  auto rows = standard_checks(plan, params, seed, o.fault);

  const fs::path diag = o.out_dir / kDiagnosticsFile;
  std::vector<DiagnosticsRecord> records;
  std::string source;
  if (fs::exists(diag)) {
    records = read_diagnostics(diag);
    source = diag.string();
  } else {
    records = simulate_records(plan, initial_state(plan, spec, o.seed), params, spec.scheme);
    source = "fresh run";
  }
  const auto env_rows = envelope_checks(records, physical_inputs(plan, params), spec.scheme.dt, "");
  rows.insert(rows.end(), env_rows.begin(), env_rows.end());

  log << "verify: " << geometry_name(plan.geometry()) << " truncation " << plan.truncation()
      << ", envelopes from " << source << " (" << records.size() << " samples)\n";
  print_table(log, rows);
  const bool ok = all_passed(rows);
  json j;
  j["source"] = source;
  j["rows"] = rows_json(rows);
  j["passed"] = ok;
  write_json(o, kVerifyJson, j);
  return ok ? kOk : kCheckFailed;
}

int cmd_selftest(const CommandOptions& o) {
  auto& log = log_of(o);
  std::vector<CheckRow> rows;
  const std::uint64_t seed = o.seed.value_or(0);

  struct Case {
    Geometry geometry;
    double sigma;
    SpectralIndex forced;
    std::vector<double> f2;
  };
  const Case cases[] = {
      {Geometry::sphere(), 0.0, {4, 2}, {}},
      {Geometry::torus(2.0 * std::numbers::pi), 0.2, {2, 1}, {0.1, 0.0}},
  };
  for (const auto& c : cases) {
    const BasisPlan plan = build_plan(c.geometry, 21);
    ModelParams p;
    p.nu = 0.05;
    p.alpha = 0.5;
    p.sigma = c.sigma;
    p.forcing = zero_forcing(plan);
    p.forcing.f1_curl[plan.position(c.forced)] = 1.0;
    p.forcing.f2.values = c.f2;
    const std::string prefix = std::string(geometry_name(c.geometry)) + ": ";
    for (auto r : standard_checks(plan, p, seed, o.fault)) {
      r.name = prefix + r.name;
      rows.push_back(r);
    }
    const double decay = eigenmode_decay_error(plan, 1.0, 1.0, c.sigma, 3, 1e-3, 1.0);
    rows.push_back({prefix + "eigenmode decay", decay, 1e-8, decay <= 1e-8});
    auto records = simulate_records(plan, random_state(plan, seed + 7), p,
                                    SchemeConfig{Scheme::if_rk4, 5e-3, 2.0, 10});
    const auto env = envelope_checks(records, physical_inputs(plan, p), 5e-3, prefix);
    rows.insert(rows.end(), env.begin(), env.end());
  }
  print_table(log, rows);
  const bool ok = all_passed(rows);
  log << (ok ? "selftest: all checks passed\n" : "selftest: FAILED\n");
  return ok ? kOk : kCheckFailed;
}

}  // namespace bardina::harness
