#include "nslab/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nslab/error.hpp"

namespace nslab {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line) {
  std::string t = trim(v);
  double x = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) throw ConfigError("expected a number, got '" + t + "'", line);
  return x;
}

long to_long(const std::string& v, int line) {
  std::string t = trim(v);
  long x = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) throw ConfigError("expected an integer, got '" + t + "'", line);
  return x;
}

bool to_bool(const std::string& v, int line) {
  std::string t = trim(v);
  if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
  if (t == "false" || t == "no" || t == "0" || t == "off") return false;
  throw ConfigError("expected a boolean, got '" + t + "'", line);
}

std::vector<double> list_at(const std::string& v, int line) {
  try {
    return parse_list(v);
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), line);
  }
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string t = trim(item);
    double x = 0.0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty()) throw DomainError("bad number '" + t + "' in list");
    out.push_back(x);
  }
  if (out.empty()) throw DomainError("empty list");
  return out;
}

ScalarLaw parse_law(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw DomainError("law needs a 'kind:' prefix: " + text);
  std::string kind = trim(text.substr(0, colon));
  auto vals = parse_list(text.substr(colon + 1));
  if (kind == "power") {
    if (vals.size() != 2) throw DomainError("power law takes scale,exponent");
    return ScalarLaw::power(vals[0], vals[1]);
  }
  if (kind == "poly") return ScalarLaw::polynomial(vals);
  throw DomainError("unknown law kind '" + kind + "'");
}

RenormalizerSpec parse_renormalizer(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw DomainError("renormalizer needs a 'family:' prefix: " + text);
  std::string kind = trim(text.substr(0, colon));
  auto vals = parse_list(text.substr(colon + 1));
  if (kind == "inverse-power" && vals.size() == 1) return RenormalizerSpec::inverse_power(vals[0]);
  if (kind == "xi" && vals.size() == 1) return RenormalizerSpec::xi_family(vals[0]);
  if (kind == "truncated" && vals.size() == 2) return RenormalizerSpec::truncated_inverse(vals[0], vals[1]);
  if (kind == "table" && vals.size() >= 5) return RenormalizerSpec::from_table(vals[0], std::vector<double>(vals.begin() + 1, vals.end()));
  throw DomainError("bad renormalizer '" + text + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig rc;
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, std::map<std::string, Entry>> sections;
  std::vector<std::pair<std::string, std::string>> order;
  std::stringstream ss(text);
  std::string raw, section;
  int line = 0;
  static const std::map<std::string, std::vector<std::string>> known{
      {"grid", {"dim", "cells", "cells_x", "cells_y", "length", "length_x", "length_y"}},
      {"time", {"horizon", "dt_policy", "dt", "cfl", "diffusive", "diffusive_factor", "snapshot_every", "max_steps"}},
      {"laws", {"preset", "pressure_kind", "p_e", "p_theta", "R", "mu", "lambda", "nu", "kappa", "gamma", "a1", "a2", "b", "c",
                "kappa_lo", "kappa_hi", "C_nu"}},
      {"regularization", {"epsilon", "eta", "delta", "beta"}},
      {"initial", {"rho", "rho_base", "rho_amp", "rho_width", "theta", "theta_base", "theta_amp", "theta_width", "velocity",
                   "velocity_amp", "theta_lo", "theta_hi", "mollifier_radius", "snapshot"}},
      {"solver", {"cg_tolerance", "cg_max_iterations", "newton_tolerance", "newton_max_iterations"}},
      {"diagnostics", {"energy_factor", "energy_calibration", "renorm_tolerance", "renormalizers", "degiorgi_M", "degiorgi_omega",
                       "degiorgi_kmax", "degiorgi_alpha", "degiorgi_beta", "degiorgi_T1", "degiorgi_threshold",
                       "poincare_samples", "poincare_M1", "poincare_M2", "probe_omega"}},
      {"forcing", {"heat_source"}},
      {"run", {"seed", "output"}},
      {"sweep", {"param", "levels"}},
  };
  while (std::getline(ss, raw)) {
    ++line;
    std::string s = raw;
    auto hash = s.find_first_of("#;");
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      section = trim(s.substr(1, s.size() - 2));
      if (!known.count(section)) throw ConfigError("unknown section [" + section + "]", line);
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line);
    if (section.empty()) throw ConfigError("key outside of any section", line);
    std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    const auto& keys = known.at(section);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
    if (sections[section].count(key)) throw ConfigError("duplicate key '" + key + "'", line);
    sections[section][key] = {value, line};
    order.emplace_back(section + "." + key, value);
  }
  rc.resolved = order;

  auto get = [&](const std::string& sec, const std::string& key) -> const Entry* {
    auto it = sections.find(sec);
    if (it == sections.end()) return nullptr;
    auto jt = it->second.find(key);
    return jt == it->second.end() ? nullptr : &jt->second;
  };
  auto num = [&](const std::string& sec, const std::string& key, double& dst) {
    if (auto e = get(sec, key)) dst = to_double(e->value, e->line);
  };
  auto integer = [&](const std::string& sec, const std::string& key, auto& dst) {
    if (auto e = get(sec, key)) dst = static_cast<std::remove_reference_t<decltype(dst)>>(to_long(e->value, e->line));
  };
  auto str = [&](const std::string& sec, const std::string& key, std::string& dst) {
    if (auto e = get(sec, key)) dst = e->value;
  };
  auto guard = [&](const std::string& sec, const std::string& key, const std::function<void(const Entry&)>& f) {
    if (auto e = get(sec, key)) {
      try {
        f(*e);
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& err) {
        throw ConfigError(err.what(), e->line);
      }
    }
  };

  // grid
  int dim = 1;
  integer("grid", "dim", dim);
  int nx = 128, ny = 64;
  if (dim == 2) nx = 64;
  integer("grid", "cells", nx);
  if (get("grid", "cells")) ny = nx;
  integer("grid", "cells_x", nx);
  integer("grid", "cells_y", ny);
  double lx = 1.0, ly = 1.0;
  num("grid", "length", lx);
  if (get("grid", "length")) ly = lx;
  num("grid", "length_x", lx);
  num("grid", "length_y", ly);
  try {
    rc.grid = dim == 1 ? Grid::line(nx, lx) : dim == 2 ? Grid::rectangle(nx, ny, lx, ly) : throw DomainError("grid dimension must be 1 or 2");
  } catch (const DomainError& e) {
    auto e1 = get("grid", "dim");
    throw ConfigError(e.what(), e1 ? e1->line : 0);
  }

  // time
  num("time", "horizon", rc.horizon);
  guard("time", "dt_policy", [&](const Entry& e) {
    if (e.value == "fixed") rc.dt.kind = DtPolicy::Kind::Fixed;
    else if (e.value == "cfl") rc.dt.kind = DtPolicy::Kind::Cfl;
    else throw ConfigError("dt_policy must be 'fixed' or 'cfl'", e.line);
  });
  num("time", "dt", rc.dt.dt);
  num("time", "cfl", rc.dt.cfl);
  guard("time", "diffusive", [&](const Entry& e) { rc.dt.diffusive = to_bool(e.value, e.line); });
  num("time", "diffusive_factor", rc.dt.diffusive_factor);
  integer("time", "snapshot_every", rc.snapshot_every);
  integer("time", "max_steps", rc.max_steps);
  if (!(rc.horizon > 0.0)) throw ConfigError("horizon must be positive", get("time", "horizon") ? get("time", "horizon")->line : 0);
  if (!(rc.dt.dt > 0.0)) throw ConfigError("dt must be positive", get("time", "dt") ? get("time", "dt")->line : 0);
  if (rc.snapshot_every < 1) throw ConfigError("snapshot_every must be >= 1", get("time", "snapshot_every")->line);

  // laws
  str("laws", "preset", rc.law_preset);
  guard("laws", "preset", [&](const Entry&) { rc.cs = constitutive_preset(rc.law_preset); });
  if (!get("laws", "preset")) rc.cs = constitutive_preset(rc.law_preset);
  guard("laws", "pressure_kind", [&](const Entry& e) {
    if (e.value == "linear") rc.cs.pressure_kind = PressureKind::LinearInDensity;
    else if (e.value == "split") rc.cs.pressure_kind = PressureKind::GeneralSplit;
    else throw ConfigError("pressure_kind must be 'linear' or 'split'", e.line);
  });
  guard("laws", "p_e", [&](const Entry& e) { rc.cs.p_e = parse_law(e.value); });
  guard("laws", "p_theta", [&](const Entry& e) { rc.cs.p_theta = parse_law(e.value); });
  guard("laws", "mu", [&](const Entry& e) { rc.cs.mu = parse_law(e.value); });
  guard("laws", "lambda", [&](const Entry& e) { rc.cs.lambda = parse_law(e.value); });
  guard("laws", "nu", [&](const Entry& e) { rc.cs.nu = parse_law(e.value); });
  guard("laws", "kappa", [&](const Entry& e) { rc.cs.kappa = parse_law(e.value); });
  num("laws", "R", rc.cs.R);
  auto& k = rc.cs.constants;
  num("laws", "gamma", k.gamma);
  num("laws", "a1", k.a1);
  num("laws", "a2", k.a2);
  num("laws", "b", k.b);
  num("laws", "c", k.c);
  num("laws", "kappa_lo", k.kappa_lo);
  num("laws", "kappa_hi", k.kappa_hi);
  num("laws", "C_nu", k.C_nu);

  // regularization
  num("regularization", "epsilon", rc.params.epsilon);
  num("regularization", "eta", rc.params.eta);
  num("regularization", "delta", rc.params.delta);
  num("regularization", "beta", rc.params.beta);

  // initial data
  auto& in = rc.initial;
  str("initial", "rho", in.rho.kind);
  num("initial", "rho_base", in.rho.base);
  num("initial", "rho_amp", in.rho.amplitude);
  num("initial", "rho_width", in.rho.width);
  str("initial", "theta", in.theta.kind);
  num("initial", "theta_base", in.theta.base);
  num("initial", "theta_amp", in.theta.amplitude);
  num("initial", "theta_width", in.theta.width);
  str("initial", "velocity", in.velocity.kind);
  num("initial", "velocity_amp", in.velocity.amplitude);
  num("initial", "theta_lo", in.theta_lo);
  num("initial", "theta_hi", in.theta_hi);
  num("initial", "mollifier_radius", rc.mollifier_radius);
  str("initial", "snapshot", in.snapshot);
  for (const char* key : {"rho", "theta"})
    guard("initial", key, [&](const Entry& e) {
      if (e.value != "constant" && e.value != "gaussian" && e.value != "two-bump")
        throw ConfigError("profile must be constant, gaussian or two-bump", e.line);
    });
  guard("initial", "velocity", [&](const Entry& e) {
    if (e.value != "zero" && e.value != "bump" && e.value != "shear") throw ConfigError("velocity must be zero, bump or shear", e.line);
  });

  // solver
  num("solver", "cg_tolerance", rc.solver.cg_tolerance);
  integer("solver", "cg_max_iterations", rc.solver.cg_max_iterations);
  num("solver", "newton_tolerance", rc.solver.newton_tolerance);
  integer("solver", "newton_max_iterations", rc.solver.newton_max_iterations);

  // diagnostics
  auto& dg = rc.diagnostics;
  num("diagnostics", "energy_factor", dg.energy_factor);
  num("diagnostics", "energy_calibration", dg.energy_calibration);
  num("diagnostics", "renorm_tolerance", dg.renorm_tolerance);
  guard("diagnostics", "renormalizers", [&](const Entry& e) {
    dg.renormalizers.clear();
    std::stringstream rs(e.value);
    std::string item;
    while (std::getline(rs, item, '|')) dg.renormalizers.push_back(parse_renormalizer(trim(item)));
  });
  num("diagnostics", "degiorgi_M", dg.degiorgi.M);
  num("diagnostics", "degiorgi_omega", dg.degiorgi.omega);
  integer("diagnostics", "degiorgi_kmax", dg.degiorgi.k_max);
  num("diagnostics", "degiorgi_alpha", dg.degiorgi.alpha);
  num("diagnostics", "degiorgi_beta", dg.degiorgi.beta_interp);
  num("diagnostics", "degiorgi_T1", dg.degiorgi_T1);
  num("diagnostics", "degiorgi_threshold", dg.degiorgi.certification_threshold);
  integer("diagnostics", "poincare_samples", dg.poincare_samples);
  num("diagnostics", "poincare_M1", dg.poincare_M1);
  num("diagnostics", "poincare_M2", dg.poincare_M2);
  num("diagnostics", "probe_omega", dg.probe_omega);
  if (dg.degiorgi_T1 > 0.0) dg.degiorgi.T = geometric_schedule(dg.degiorgi_T1, dg.degiorgi.k_max);
  guard("diagnostics", "degiorgi_kmax", [&](const Entry&) { dg.degiorgi.validate(); });

  num("forcing", "heat_source", rc.forcing.heat_source);
  guard("run", "seed", [&](const Entry& e) {
    long s = to_long(e.value, e.line);
    if (s < 0) throw ConfigError("seed must be non-negative", e.line);
    rc.seed = static_cast<std::uint64_t>(s);
  });
  str("run", "output", rc.output);
  guard("sweep", "param", [&](const Entry& e) {
    if (e.value != "epsilon" && e.value != "eta" && e.value != "delta") throw ConfigError("sweep param must be epsilon, eta or delta", e.line);
    rc.sweep_param = e.value;
  });
  guard("sweep", "levels", [&](const Entry& e) { rc.sweep_levels = list_at(e.value, e.line); });
  return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

InitialData build_initial(const RunConfig& rc) { return make_initial_data(rc.grid, rc.initial); }

SimulationConfig build_simulation(const RunConfig& rc, const InitialData& raw) {
  SimulationConfig s;
  s.cs = rc.cs;
  s.params = rc.params;
  s.init = regularize_initial_data(raw, rc.params.delta > 0.0 ? rc.params.delta : 1e-12, rc.params.beta, rc.mollifier_radius);
  s.horizon = rc.horizon;
  s.dt = rc.dt;
  s.snapshot_every = rc.snapshot_every;
  s.max_steps = rc.max_steps;
  s.forcing = rc.forcing;
  s.solver = rc.solver;
  return s;
}

SimulationConfig build_simulation(const RunConfig& rc) { return build_simulation(rc, build_initial(rc)); }

}  // namespace nslab
