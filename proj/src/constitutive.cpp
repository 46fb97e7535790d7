#include "nslab/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nslab/error.hpp"

namespace nslab {

ConstitutiveSet constitutive_preset(const std::string& name) {
  ConstitutiveSet cs;
  cs.mu = ScalarLaw::polynomial({0.1, 1.0});
  cs.lambda = ScalarLaw::constant(0.0);
  cs.kappa = ScalarLaw::polynomial({1.0, 0.0, 1.0});
  if (name == "ideal-like") {
    cs.pressure_kind = PressureKind::LinearInDensity;
    cs.p_e = ScalarLaw::power(1.0, 4.0);
    cs.R = 1.0;
    cs.constants.gamma = 4.0;
  } else if (name == "general-split") {
    cs.pressure_kind = PressureKind::GeneralSplit;
    cs.p_e = ScalarLaw::power(1.0, 2.0);
    cs.p_theta = ScalarLaw::power(1.0, 0.5);
    cs.constants.gamma = 2.0;
  } else if (name == "degenerate") {
    cs.pressure_kind = PressureKind::LinearInDensity;
    cs.p_e = ScalarLaw::power(1.0, 4.0);
    cs.R = 1.0;
    cs.mu = ScalarLaw::polynomial({0.0, 1.0});
    cs.lambda = ScalarLaw::constant(0.1);
    cs.constants.gamma = 4.0;
  } else {
    throw DomainError("unknown constitutive preset '" + name + "'");
  }
  return cs;
}

std::vector<std::string> constitutive_preset_names() { return {"ideal-like", "general-split", "degenerate"}; }

double pressure(const ConstitutiveSet& cs, double rho, double theta) {
  if (rho < 0.0 || theta < 0.0) throw DomainError("pressure needs rho >= 0 and theta >= 0");
  return cs.p_e(rho) + theta * cs.thermal_coefficient(rho);
}

double kappa_primitive(const ConstitutiveSet& cs, double theta) {
  if (theta < 0.0) throw DomainError("kappa_primitive needs theta >= 0");
  return cs.kappa.primitive(theta);
}

double elastic_potential(const ConstitutiveSet& cs, double rho) {
  if (rho < kRhoFloor) throw DomainError("elastic_potential needs rho >= 1e-8");
  return cs.p_e.potential(rho);
}

double rho_elastic_potential(const ConstitutiveSet& cs, double rho, bool* clamped) {
  if (rho < 0.0) throw DomainError("negative density");
  bool low = rho < kRhoFloor;
  if (clamped) *clamped = low;
  if (rho == 0.0) return 0.0;
  return rho * cs.p_e.potential(std::max(rho, kRhoFloor));
}

PressureDecomposition pe_decomposition(const ConstitutiveSet& cs, double rho_max, int samples) {
  if (samples < 3 || !(rho_max > 0.0)) throw DomainError("decomposition needs a non-trivial sample grid");
  PressureDecomposition d;
  std::size_t n = static_cast<std::size_t>(samples);
  d.rho.resize(n);
  d.p_m.resize(n);
  d.p_b.resize(n);
  double running = -HUGE_VAL;
  for (std::size_t k = 0; k < n; ++k) {
    double r = rho_max * static_cast<double>(k) / static_cast<double>(n - 1);
    double pe = cs.p_e(r);
    running = std::max(running, pe);
    d.rho[k] = r;
    d.p_m[k] = running;
    d.p_b[k] = running - pe;
  }
  std::size_t last = 0;
  bool any = false;
  for (std::size_t k = 0; k < n; ++k)
    if (d.p_b[k] > 0.0) {
      last = k;
      any = true;
    }
  if (any && last + 1 >= n)
    throw DomainError("p_e monotonisation leaves p_b without compact support on [0, rho_max]");
  d.support_bound = any ? d.rho[last + 1] : 0.0;
  double step = rho_max / static_cast<double>(n - 1);
  auto rho_grid = d.rho;
  auto pb = d.p_b;
  double bound = d.support_bound;
  auto pb_fn = [rho_grid, pb, step, bound](double r) {
    if (r <= 0.0) return pb.front();
    if (r >= bound) return 0.0;
    std::size_t k = std::min(static_cast<std::size_t>(r / step), pb.size() - 2);
    double t = (r - rho_grid[k]) / step;
    return std::max(0.0, (1.0 - t) * pb[k] + t * pb[k + 1]);
  };
  d.p_b_law = ScalarLaw::custom(pb_fn, "p_b");
  ScalarLaw pe = cs.p_e;
  d.p_m_law = ScalarLaw::custom([pe, pb_fn](double r) { return pe(r) + pb_fn(r); }, "p_m");
  for (std::size_t k = 0; k < n; ++k)
    d.max_reconstruction_error = std::max(d.max_reconstruction_error, std::abs(d.p_m[k] - d.p_b[k] - cs.p_e(d.rho[k])));
  return d;
}

bool ValidationReport::all_passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const ValidationEntry& e) { return e.passed; });
}

const ValidationEntry* ValidationReport::first_failure() const {
  for (const auto& e : entries)
    if (!e.passed) return &e;
  return nullptr;
}

std::vector<double> log_sample_grid(double max, int points) {
  std::vector<double> z{0.0};
  double lo = std::log(max * 1e-9), hi = std::log(max);
  for (int k = 0; k < points - 1; ++k) z.push_back(std::exp(lo + (hi - lo) * k / std::max(1, points - 2)));
  return z;
}

namespace {

// Records the first sample where violation(z) > 0.
template <class V>
ValidationEntry sampled(const std::string& name, const std::vector<double>& grid, V&& violation) {
  ValidationEntry e{name, true, 0.0, 0.0, ""};
  for (double z : grid) {
    double v = violation(z);
    if (!(v <= 0.0)) {
      e.passed = false;
      e.witness = z;
      e.witness_value = v;
      std::ostringstream msg;
      msg << "violated at " << z << " by " << v;
      e.detail = msg.str();
      return e;
    }
  }
  return e;
}

ValidationEntry scalar_rule(const std::string& name, bool ok, double value, const std::string& detail) {
  return ValidationEntry{name, ok, 0.0, value, ok ? "" : detail};
}

double tol(double scale) { return 1e-12 * (1.0 + std::abs(scale)); }

ValidationEntry lipschitz(const std::string& name, const ScalarLaw& f, const std::vector<double>& grid, double bound) {
  double head = 0.0, tail = 0.0, worst_z = 0.0, worst = 0.0;
  double split = grid.back() / 10.0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    double slope = std::abs(f(grid[k]) - f(grid[k - 1])) / (grid[k] - grid[k - 1]);
    if (grid[k] <= split) head = std::max(head, slope);
    else tail = std::max(tail, slope);
    if (slope > worst) {
      worst = slope;
      worst_z = grid[k];
    }
  }
  ValidationEntry e{name, true, worst_z, worst, ""};
  if (!std::isfinite(worst) || worst > bound) {
    e.passed = false;
    e.detail = "sampled slope exceeds the Lipschitz bound";
  } else if (tail > 4.0 * head + 1e-12) {
    e.passed = false;
    e.detail = "sampled slope keeps growing on the last decade";
  }
  return e;
}

}  // namespace

ValidationReport validate_hypotheses(const ConstitutiveSet& cs, double beta, const SamplingOptions& opt) {
  ValidationReport r;
  const auto& k = cs.constants;
  const double gamma = k.gamma;
  auto theta_grid = log_sample_grid(opt.theta_max, opt.points);
  auto rho_grid = log_sample_grid(opt.rho_max, opt.points);

  {
    std::ostringstream msg;
    msg << "beta = " << beta << " must exceed max{4, gamma} = " << std::max(4.0, gamma);
    r.entries.push_back(scalar_rule("beta > max{4, gamma}", beta > std::max(4.0, gamma), beta, msg.str()));
  }
  if (cs.pressure_kind == PressureKind::GeneralSplit) {
    r.entries.push_back(scalar_rule("gamma > 3/2 (general split pressure)", gamma > 1.5, gamma,
                                    "general split pressure requires gamma > 3/2"));
  } else {
    r.entries.push_back(scalar_rule("gamma > 3 (pressure linear in density)", gamma > 3.0, gamma,
                                    "pressure linear in density requires gamma > 3"));
  }
  bool consts_ok = k.a1 > 0 && k.a2 > 0 && k.b > 0 && k.c > 0 && k.kappa_lo > 0 && k.kappa_hi > 0 && k.C_nu > 0;
  r.entries.push_back(scalar_rule("hypothesis constants positive", consts_ok, 0.0, "a1, a2, b, c, kappa bounds and C_nu must be positive"));

  r.entries.push_back(scalar_rule("p_e(0) = 0", std::abs(cs.p_e(0.0)) <= 1e-12, cs.p_e(0.0), "p_e(0) must vanish"));
  std::vector<double> rho_pos(rho_grid.begin() + 1, rho_grid.end());
  r.entries.push_back(sampled("p_e' >= a1 rho^(gamma-1) - b", rho_pos, [&](double z) {
    double lower = k.a1 * std::pow(z, gamma - 1.0) - k.b;
    return lower - cs.p_e.derivative(z) - tol(lower);
  }));
  r.entries.push_back(sampled("p_e <= a2 rho^gamma + b", rho_grid, [&](double z) {
    double upper = k.a2 * std::pow(z, gamma) + k.b;
    return cs.p_e(z) - upper - tol(upper);
  }));

  if (cs.pressure_kind == PressureKind::GeneralSplit) {
    r.entries.push_back(scalar_rule("p_theta(0) = 0", std::abs(cs.p_theta(0.0)) <= 1e-12, cs.p_theta(0.0), "p_theta(0) must vanish"));
    r.entries.push_back(sampled("p_theta' >= 0", rho_pos, [&](double z) { return -cs.p_theta.derivative(z) - 1e-12; }));
    r.entries.push_back(sampled("p_theta <= c(1 + rho^(gamma/3))", rho_grid, [&](double z) {
      double upper = k.c * (1.0 + std::pow(z, gamma / 3.0));
      return cs.p_theta(z) - upper - tol(upper);
    }));
  } else {
    r.entries.push_back(scalar_rule("R > 0", cs.R > 0.0, cs.R, "gas constant must be positive"));
  }

  r.entries.push_back(sampled("mu >= 0", theta_grid, [&](double z) { return -cs.mu(z) - 1e-14; }));
  r.entries.push_back(sampled("lambda + 2/3 mu >= 0", theta_grid, [&](double z) {
    return -(cs.lambda(z) + 2.0 / 3.0 * cs.mu(z)) - tol(cs.mu(z));
  }));
  {
    ValidationEntry e{"mu strictly increasing", true, 0.0, 0.0, ""};
    for (std::size_t i = 1; i < theta_grid.size(); ++i) {
      double a = cs.mu(theta_grid[i - 1]), b = cs.mu(theta_grid[i]);
      if (!(b > a)) {
        e.passed = false;
        e.witness = theta_grid[i];
        e.witness_value = a - b;
        std::ostringstream msg;
        msg << "mu not strictly increasing near theta = " << theta_grid[i];
        e.detail = msg.str();
        break;
      }
    }
    r.entries.push_back(e);
  }
  r.entries.push_back(lipschitz("mu Lipschitz", cs.mu, theta_grid, opt.lipschitz_bound));
  r.entries.push_back(lipschitz("lambda Lipschitz", cs.lambda, theta_grid, opt.lipschitz_bound));
  r.entries.push_back(sampled("2mu + 3lambda >= nu > 0", theta_grid, [&](double z) {
    double nu = cs.nu_at(z);
    double full = 2.0 * cs.mu(z) + 3.0 * cs.lambda(z);
    if (!(nu > 0.0)) return 1.0 - nu;
    return nu - full - tol(full);
  }));
  {
    std::vector<double> small;
    for (double z : theta_grid)
      if (z <= 1.0) small.push_back(z);
    r.entries.push_back(sampled("nu >= C_nu theta for theta <= 1", small, [&](double z) {
      return k.C_nu * z - cs.nu_at(z) - tol(z);
    }));
  }
  r.entries.push_back(sampled("kappa_lo(1+theta^2) <= kappa <= kappa_hi(1+theta^2)", theta_grid, [&](double z) {
    double base = 1.0 + z * z;
    double kv = cs.kappa(z);
    return std::max(k.kappa_lo * base - kv, kv - k.kappa_hi * base) - tol(base);
  }));
  return r;
}

}  // namespace nslab
