#include "bardina/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

#include "bardina/errors.hpp"

namespace bardina::harness {

using nlohmann::json;

namespace {

// Object reader that remembers which keys were consumed so the leftovers can
// be rejected with their full path.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number()) fail(path(key), "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path(key), "must be finite");
    return x;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::int64_t integer(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number_integer()) fail(path(key), "must be an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) { return has(key) ? integer(key) : fallback; }

  std::uint64_t seed(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number_unsigned()) fail(path(key), "must be a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key) {
    const json& v = require(key);
    if (!v.is_string()) fail(path(key), "must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = require(key);
    if (!v.is_array()) fail(path(key), "must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(path(key) + "[" + std::to_string(i) + "]", "must be a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  Reader object(const std::string& key) { return Reader(require(key), path(key)); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(path(it.key()), "unknown key");
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError((where.empty() ? std::string("config") : where) + ": " + what);
  }

 private:
  const json& require(const std::string& key) {
    if (!j_.contains(key)) fail(path(key), "missing required key");
    seen_.insert(key);
    return j_.at(key);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

SpectralIndex read_index(Reader& r, const std::string& key) {
  const json& v = r.raw(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
    Reader::fail(r.path(key), "must be a pair of integers");
  return SpectralIndex{v[0].get<int>(), v[1].get<int>()};
}

void check_positive(double x, const std::string& where) {
  if (!(x > 0.0)) Reader::fail(where, "must be positive");
}

void check_mode(const BasisPlan& plan, const SpectralIndex& idx, const std::string& where) {
  if (!plan.contains(idx))
    Reader::fail(where, "mode [" + std::to_string(idx.first) + ", " + std::to_string(idx.second) +
                            "] is outside the truncation");
}

}  // namespace

RunSpec parse_config(const std::string& text, std::optional<std::uint64_t> seed_override) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  Reader top(doc, "");
  RunSpec spec;

  const std::string geometry = top.string("geometry");
  if (geometry == "sphere") {
    spec.geometry = Geometry::sphere();
    spec.truncation = static_cast<int>(top.integer("Lmax"));
    if (spec.truncation < 1) Reader::fail("Lmax", "must be at least 1");
  } else if (geometry == "torus") {
    const double L = top.number("L", 2.0 * std::numbers::pi);
    check_positive(L, "L");
    spec.geometry = Geometry::torus(L);
    spec.truncation = static_cast<int>(top.integer("Kmax"));
    if (spec.truncation < 1) Reader::fail("Kmax", "must be at least 1");
  } else {
    Reader::fail("geometry", "must be \"sphere\" or \"torus\"");
  }

  spec.nu = top.number("nu");
  check_positive(spec.nu, "nu");
  spec.alpha = top.number("alpha");
  check_positive(spec.alpha, "alpha");
  spec.sigma = top.number("sigma", 0.0);
  if (spec.sigma < 0.0) Reader::fail("sigma", "must be non-negative");
  if (spec.geometry.is_torus() && spec.sigma == 0.0)
    Reader::fail("sigma", "must be positive on the torus");

  spec.scheme.dt = top.number("dt", 1e-3);
  check_positive(spec.scheme.dt, "dt");
  spec.scheme.t_end = top.number("T", 1.0);
  if (spec.scheme.t_end < 0.0) Reader::fail("T", "must be non-negative");
  spec.scheme.stride = static_cast<int>(top.integer("stride", 1));
  if (spec.scheme.stride < 1) Reader::fail("stride", "must be at least 1");
  if (top.has("scheme")) {
    const auto s = top.string("scheme");
    if (s == "if_rk4")
      spec.scheme.scheme = Scheme::if_rk4;
    else if (s == "if_euler")
      spec.scheme.scheme = Scheme::if_euler;
    else
      Reader::fail("scheme", "must be \"if_rk4\" or \"if_euler\"");
  }
  if (top.has("seed")) spec.seed = top.seed("seed");
  if (top.has("threads")) {
    const auto t = top.integer("threads");
    if (t < 1) Reader::fail("threads", "must be at least 1");
    spec.threads = static_cast<unsigned>(t);
  }

  const BasisPlan plan = make_plan(spec);

  if (top.has("forcing")) {
    Reader f = top.object("forcing");
    if (f.has("modes")) {
      const json& modes = f.raw("modes");
      if (!modes.is_array()) Reader::fail("forcing.modes", "must be an array");
      for (std::size_t i = 0; i < modes.size(); ++i) {
        Reader m(modes[i], "forcing.modes[" + std::to_string(i) + "]");
        ModeAmplitude ma;
        ma.index = read_index(m, "index");
        ma.amplitude = m.number("amplitude");
        m.finish();
        check_mode(plan, ma.index, m.path("index"));
        spec.forcing.push_back(ma);
      }
    }
    if (f.has("f2")) {
      const auto f2 = f.numbers("f2");
      if (f2.size() != 2) Reader::fail("forcing.f2", "must have two entries");
      if (spec.geometry.is_sphere() && (f2[0] != 0.0 || f2[1] != 0.0))
        Reader::fail("forcing.f2", "the sphere has no harmonic fields");
      spec.f2 = {f2[0], f2[1]};
    }
    f.finish();
  }

  if (top.has("initial")) {
    Reader ic = top.object("initial");
    const auto type = ic.string("type");
    if (type == "zero") {
      spec.initial.kind = InitialSpec::Kind::zero;
    } else if (type == "eigenmode") {
      spec.initial.kind = InitialSpec::Kind::eigenmode;
      spec.initial.index = read_index(ic, "index");
      check_mode(plan, spec.initial.index, "initial.index");
      spec.initial.amplitude = ic.number("amplitude", 1.0);
    } else if (type == "random") {
      spec.initial.kind = InitialSpec::Kind::random;
      if (ic.has("seed")) spec.initial.seed = ic.seed("seed");
      spec.initial.slope = ic.number("slope", 2.0);
      if (ic.has("energy")) {
        spec.initial.energy = ic.number("energy");
        if (*spec.initial.energy < 0.0) Reader::fail("initial.energy", "must be non-negative");
      }
      if (!spec.initial.seed && !spec.seed && !seed_override) Reader::fail("initial.seed", "a seed is required for random initial data");
    } else {
      Reader::fail("initial.type", "must be \"zero\", \"eigenmode\" or \"random\"");
    }
    ic.finish();
  }

  if (top.has("lyapunov")) {
    Reader ly = top.object("lyapunov");
    LyapunovSpec ls;
    ls.config.N = static_cast<int>(ly.integer("N"));
    ls.config.t_transient = ly.number("t_transient", 0.0);
    ls.config.t_average = ly.number("t_average");
    ls.config.renorm_interval = ly.number("renorm_interval");
    ls.config.perturbation = ly.number("perturbation", 1e-3);
    if (ly.has("seed")) ls.seed = ly.seed("seed");
    ly.finish();
    validate_lyapunov(plan, ls.config);
    if (ls.config.perturbation > 0.0 && !ls.seed && !spec.seed && !seed_override)
      Reader::fail("lyapunov.seed", "a seed is required for the perturbed tangent ensemble");
    spec.lyapunov = ls;
  }

  if (top.has("bounds")) {
    Reader b = top.object("bounds");
    spec.bounds.n_max = static_cast<int>(b.integer("n_max", 5));
    if (spec.bounds.n_max < 1) Reader::fail("bounds.n_max", "must be at least 1");
    spec.bounds.c = b.number("c", 1.0);
    check_positive(spec.bounds.c, "bounds.c");
    if (b.has("domain_area")) {
      spec.bounds.domain_area = b.number("domain_area");
      check_positive(*spec.bounds.domain_area, "bounds.domain_area");
    }
    b.finish();
  }

  if (top.has("sweep")) {
    Reader s = top.object("sweep");
    SweepSpec sw;
    auto list = [&](const char* key, std::vector<double>& out, bool allow_zero) {
      if (!s.has(key)) return;
      out = s.numbers(key);
      for (std::size_t i = 0; i < out.size(); ++i) {
        const bool ok = allow_zero ? out[i] >= 0.0 : out[i] > 0.0;
        if (!ok) Reader::fail(s.path(key) + "[" + std::to_string(i) + "]", allow_zero ? "must be non-negative" : "must be positive");
      }
    };
    list("nu", sw.nu, false);
    list("alpha", sw.alpha, false);
    list("sigma", sw.sigma, !spec.geometry.is_torus());
    list("forcing_scale", sw.forcing_scale, true);
    s.finish();
    spec.sweep = sw;
  }

  top.finish();
  return spec;
}

RunSpec load_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), seed_override);
}

BasisPlan make_plan(const RunSpec& spec) { return build_plan(spec.geometry, spec.truncation); }

ModelParams model_params(const BasisPlan& plan, const RunSpec& spec) {
  ModelParams p;
  p.nu = spec.nu;
  p.alpha = spec.alpha;
  p.sigma = spec.sigma;
  p.forcing = zero_forcing(plan);
  for (const auto& m : spec.forcing) p.forcing.f1_curl[plan.position(m.index)] += m.amplitude;
  if (plan.harmonic_dim() == 2) p.forcing.f2.values = {spec.f2[0], spec.f2[1]};
  return p;
}

std::optional<std::uint64_t> resolve_seed(const RunSpec& spec, std::optional<std::uint64_t> block,
                                          std::optional<std::uint64_t> override_seed,
                                          std::uint64_t offset) {
  if (override_seed) return *override_seed + offset;
  if (block) return block;
  if (spec.seed) return *spec.seed + offset;
  return std::nullopt;
}

VelocityState initial_state(const BasisPlan& plan, const RunSpec& spec,
                            std::optional<std::uint64_t> override_seed) {
  const auto& ic = spec.initial;
  switch (ic.kind) {
    case InitialSpec::Kind::zero:
      return zero_state(plan);
    case InitialSpec::Kind::eigenmode: {
      VelocityState s = zero_state(plan);
      s.psi[plan.position(ic.index)] = ic.amplitude;
      return s;
    }
    case InitialSpec::Kind::random: {
      const auto seed = resolve_seed(spec, ic.seed, override_seed, 0);
      if (!seed) throw ConfigError("initial.seed: a seed is required for random initial data");
      VelocityState s = random_state(plan, *seed, ic.slope);
      if (ic.energy) {
        const double a2 = spec.alpha * spec.alpha;
        const double e1 = inner_l2(plan, s, s) + a2 * inner_v(plan, s, s);
        const double k = e1 > 0.0 ? std::sqrt(*ic.energy / e1) : 0.0;
        for (double& x : s.psi.values) x *= k;
        for (double& x : s.harmonic.values) x *= k;
      }
      return s;
    }
  }
  return zero_state(plan);
}

LyapunovConfig lyapunov_config(const RunSpec& spec, std::optional<std::uint64_t> override_seed,
                               unsigned threads) {
  if (!spec.lyapunov) throw ConfigError("lyapunov: block is required for this command");
  LyapunovConfig c = spec.lyapunov->config;
  c.seed = resolve_seed(spec, spec.lyapunov->seed, override_seed, 1).value_or(0);
  c.threads = threads;
  return c;
}

}  // namespace bardina::harness
