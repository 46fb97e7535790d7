#include "nslab/diagnostics.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "nslab/error.hpp"
#include "nslab/operators.hpp"
#include "nslab/viscous.hpp"

namespace nslab {

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  if (t.size() != f.size()) throw DomainError("trapezoid: node/value count mismatch");
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return s;
}

double total_energy(const FluidState& s, const ConstitutiveSet& cs, double delta, double beta) {
  return energy_parts(s, cs, delta, beta).total();
}

double first_step_defect(const Trajectory& traj) {
  const auto& L = traj.ledger;
  double e0 = L.size() ? L.energy(0) : 0.0;
  // Only an energy excess counts; numerical dissipation in step one would otherwise blunt the check.
  double floor = 1e-13 * std::max(1.0, std::abs(e0));
  if (L.size() < 2) return floor;
  double r1 = L.energy(1) + L.dissipation(1) - L.energy(0);
  return std::max(r1, 0.0) + floor;
}

InequalityReport energy_inequality_check(const Trajectory& traj, const EnergyCheckOptions& opt) {
  InequalityReport r;
  r.name = "energy inequality";
  const auto& L = traj.ledger;
  if (L.size() == 0) return r;
  double defect = opt.calibrated_defect ? *opt.calibrated_defect : first_step_defect(traj);
  double dt = traj.first_dt > 0.0 ? traj.first_dt : 1.0;
  double e0 = L.energy(0);
  r.max_residual = -HUGE_VAL;
  r.max_excess = -HUGE_VAL;
  for (std::size_t i = 0; i < L.size(); ++i) {
    double res = L.energy(i) + L.dissipation(i) - e0;
    double tol = opt.factor * defect * L.time[i] / dt;
    r.times.push_back(L.time[i]);
    r.residual.push_back(res);
    r.tolerance.push_back(tol);
    r.max_residual = std::max(r.max_residual, res);
    r.max_excess = std::max(r.max_excess, res - tol);
    if (res > tol) r.passed = false;
  }
  return r;
}

ScalarField effective_viscous_pressure(const FluidState& s, const ConstitutiveSet& cs, const RegularizationParams& p) {
  ScalarField dv = div(s.u);
  ScalarField out(s.rho.grid());
  for (std::size_t k = 0; k < out.size(); ++k) {
    double th = s.theta[k];
    out[k] = pressure(cs, s.rho[k], th) + p.delta * std::pow(s.rho[k], p.beta) - (cs.lambda(th) + 2.0 * cs.mu(th) + p.eta) * dv[k];
  }
  return out;
}

double TestFunction::psi(double t, double T) const {
  double s = t / T;
  switch (temporal) {
    case 0: return 1.0 - s;
    case 1: return (1.0 - s) * (1.0 - s);
    default: return 4.0 * s * (1.0 - s);
  }
}

double TestFunction::dpsi(double t, double T) const {
  double s = t / T;
  switch (temporal) {
    case 0: return -1.0 / T;
    case 1: return -2.0 * (1.0 - s) / T;
    default: return 4.0 * (1.0 - 2.0 * s) / T;
  }
}

ScalarField TestFunction::chi(const Grid& g) const {
  const double pi = std::acos(-1.0);
  double lx = g.length[0], ly = g.length[1];
  int m = spatial;
  return ScalarField::from_function(g, [&](double x, double y) {
    if (m == 0) return 1.0;
    if (g.dim == 1) return 1.0 + std::cos(m * pi * x / lx);
    switch (m) {
      case 1: return 1.0 + std::cos(pi * x / lx) * std::cos(pi * y / ly);
      case 2: return 1.0 + std::cos(2.0 * pi * x / lx);
      default: return 1.0 + std::cos(pi * x / lx) * std::cos(3.0 * pi * y / ly);
    }
  });
}

std::string TestFunction::name() const {
  std::ostringstream s;
  s << "psi" << temporal << "_chi" << spatial;
  return s.str();
}

std::vector<TestFunction> test_bank() {
  std::vector<TestFunction> bank;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 4; ++b) bank.push_back({a, b});
  return bank;
}

double RenormTerms::magnitude() const {
  return std::abs(time_derivative) + std::abs(transport) + std::abs(diffusion) + std::abs(cubic) + std::abs(viscous) +
         std::abs(conduction) + std::abs(pressure) + std::abs(epsilon) + std::abs(initial);
}

namespace {

// \sum_faces w_f (a_R - a_L)(b_R - b_L)/h^2 * volume, interior faces only
double face_pairing(const ScalarField& a, const ScalarField& b) {
  const Grid& g = a.grid();
  double s = 0.0;
  int nx = g.cells[0], ny = g.dim == 2 ? g.cells[1] : 1;
  double hx = g.spacing(0);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) s += (a.at(i, j) - a.at(i - 1, j)) * (b.at(i, j) - b.at(i - 1, j)) / (hx * hx);
  if (g.dim == 2) {
    double hy = g.spacing(1);
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) s += (a.at(i, j) - a.at(i, j - 1)) * (b.at(i, j) - b.at(i, j - 1)) / (hy * hy);
  }
  return s * g.cell_volume();
}

// \sum_faces F_f q_upwind (c_R - c_L)/h * volume
double transport_pairing(const FaceField& F, const ScalarField& q, const ScalarField& c) {
  const Grid& g = q.grid();
  double s = 0.0;
  int nx = g.cells[0], ny = g.dim == 2 ? g.cells[1] : 1;
  double hx = g.spacing(0);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      double f = F.normal[0][F.face_index(0, i, j)];
      s += f * (f > 0.0 ? q.at(i - 1, j) : q.at(i, j)) * (c.at(i, j) - c.at(i - 1, j)) / hx;
    }
  if (g.dim == 2) {
    double hy = g.spacing(1);
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double f = F.normal[1][F.face_index(1, i, j)];
        s += f * (f > 0.0 ? q.at(i, j - 1) : q.at(i, j)) * (c.at(i, j) - c.at(i, j - 1)) / hy;
      }
  }
  return s * g.cell_volume();
}

}  // namespace

RenormTerms renorm_terms(const Trajectory& traj, const Renormalizer& h, const TestFunction& phi) {
  if (traj.snapshots.empty()) throw DomainError("empty trajectory");
  const auto& cs = traj.cs;
  const auto& p = traj.params;
  const Grid& g = traj.snapshots.front().rho.grid();
  const double T = traj.snapshots.back().t;
  if (!(T > 0.0)) throw DomainError("trajectory has zero duration");
  ScalarField chi = phi.chi(g);
  ScalarField lap_chi = laplacian(chi, Boundary::Neumann);

  std::size_t n = traj.snapshots.size();
  std::vector<double> t(n), ftime(n), ftrans(n), fdiff(n), fcub(n), fvisc(n), fcond(n), fpres(n), feps(n);
  for (std::size_t s = 0; s < n; ++s) {
    const FluidState& st = traj.snapshots[s];
    t[s] = st.t;
    double ps = phi.psi(st.t, T), dps = phi.dpsi(st.t, T);
    ScalarField H = map(st.theta, [&](double v) { return h.H(v); });
    ScalarField Kh = map(st.theta, [&](double v) { return h.K_h(cs.kappa, v); });
    ScalarField mu = map(st.theta, [&](double v) { return cs.mu(v); });
    ScalarField lam = map(st.theta, [&](double v) { return cs.lambda(v); });
    ScalarField Q = viscous_density(st.u, mu, lam).s_grad_u;
    ScalarField gt2 = grad_squared(st.theta, Boundary::Neumann);
    ScalarField dv = div(st.u);
    ScalarField g_eps(g);
    double a1 = 0, a3 = 0, a4 = 0, a5 = 0, a6 = 0, a7 = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      double th = st.theta[k], hv = h.h(th);
      a1 += (p.delta + st.rho[k]) * H[k] * chi[k];
      a3 += Kh[k] * lap_chi[k];
      a4 += p.delta * th * th * th * hv * chi[k];
      a5 += Q[k] * hv * chi[k];
      a6 += h.dh(th) * cs.kappa(th) * gt2[k] * chi[k];
      a7 += hv * th * cs.thermal_coefficient(st.rho[k]) * dv[k] * chi[k];
      g_eps[k] = (H[k] - th * hv) * chi[k];
    }
    double vol = g.cell_volume();
    ftime[s] = dps * a1 * vol;
    ftrans[s] = ps * transport_pairing(mass_flux(st.rho, st.u), H, chi);
    fdiff[s] = ps * a3 * vol;
    fcub[s] = -ps * a4 * vol;
    fvisc[s] = (p.delta - 1.0) * ps * a5 * vol;
    fcond[s] = ps * a6 * vol;
    fpres[s] = ps * a7 * vol;
    feps[s] = p.epsilon * ps * face_pairing(st.rho, g_eps);
  }
  RenormTerms r;
  r.time_derivative = trapezoid(t, ftime);
  r.transport = trapezoid(t, ftrans);
  r.diffusion = trapezoid(t, fdiff);
  r.cubic = trapezoid(t, fcub);
  r.viscous = trapezoid(t, fvisc);
  r.conduction = trapezoid(t, fcond);
  r.pressure = trapezoid(t, fpres);
  r.epsilon = trapezoid(t, feps);
  const FluidState& s0 = traj.snapshots.front();
  double init = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) init += (p.delta + s0.rho[k]) * h.H(s0.theta[k]) * chi[k];
  r.initial = -init * g.cell_volume() * phi.psi(0.0, T);
  return r;
}

InequalityReport renorm_temperature_residual(const Trajectory& traj, const Renormalizer& h, const TestFunction& phi,
                                             const RenormOptions& opt) {
  if (!h.admissible() && !opt.allow_inadmissible)
    throw DomainError("renormalizer " + h.name() + " is not admissible: " + h.violation());
  RenormTerms terms = renorm_terms(traj, h, phi);
  const Grid& g = traj.snapshots.front().rho.grid();
  double T = traj.snapshots.back().t;
  // time integrals are trapezoid sums over snapshots, so the snapshot gap sets the resolution
  double dt = traj.stats.dt_max > 0.0 ? traj.stats.dt_max : traj.first_dt;
  for (std::size_t s = 1; s < traj.snapshots.size(); ++s)
    dt = std::max(dt, traj.snapshots[s].t - traj.snapshots[s - 1].t);
  double hr = g.spacing(0) / g.length[0];
  if (g.dim == 2) hr = std::max(hr, g.spacing(1) / g.length[1]);
  InequalityReport r;
  r.name = "renormalized temperature inequality [" + h.name() + ", " + phi.name() + "]";
  double res = terms.lhs() - terms.rhs();
  double tol = opt.tolerance_factor * std::max(dt / T, hr) * terms.magnitude();
  r.times = {T};
  r.residual = {res};
  r.tolerance = {tol};
  r.max_residual = res;
  r.max_excess = res - tol;
  r.passed = res <= tol;
  return r;
}

namespace {

void check_poincare_hypotheses(const ScalarField& rho, double gamma, double M1, double M2) {
  if (!(gamma > 1.2)) throw DomainError("weighted Poincare inequality needs gamma > 6/5");
  double mass = integrate(rho);
  if (mass < M1) throw DomainError("density mass below M1");
  double pg = integrate(map(rho, [&](double r) { return std::pow(std::max(r, 0.0), gamma); }));
  if (pg > M2) throw DomainError("integral of rho^gamma exceeds M2");
}

}  // namespace

PoincareResult weighted_poincare_check(const ScalarField& rho, const ScalarField& v, double gamma, double M1, double M2) {
  check_poincare_hypotheses(rho, gamma, M1, M2);
  require_same_grid(rho.grid(), v.grid());
  PoincareResult r;
  double l2 = inner(v, v);
  double g2 = integrate(grad_squared(v, Boundary::Neumann));
  double weighted = integrate(map(rho, v, [](double a, double b) { return a * std::abs(b); }));
  r.lhs = std::sqrt(l2 + g2);
  r.rhs_raw = std::sqrt(g2) + weighted;
  r.ratio = r.rhs_raw > 0.0 ? r.lhs / r.rhs_raw : (r.lhs > 0.0 ? HUGE_VAL : 0.0);
  return r;
}

PoincareResult weighted_poincare_check(const ScalarField& rho, const VectorField& v, double gamma, double M1, double M2) {
  check_poincare_hypotheses(rho, gamma, M1, M2);
  require_same_grid(rho.grid(), v.grid());
  const Grid& g = rho.grid();
  double l2 = 0.0, g2 = 0.0;
  ScalarField mag(g);
  for (int a = 0; a < g.dim; ++a) {
    l2 += inner(v[a], v[a]);
    g2 += integrate(grad_squared(v[a], Boundary::Neumann));
    for (std::size_t k = 0; k < g.size(); ++k) mag[k] += v[a][k] * v[a][k];
  }
  double weighted = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) weighted += rho[k] * std::sqrt(mag[k]);
  weighted *= g.cell_volume();
  PoincareResult r;
  r.lhs = std::sqrt(l2 + g2);
  r.rhs_raw = std::sqrt(g2) + weighted;
  r.ratio = r.rhs_raw > 0.0 ? r.lhs / r.rhs_raw : (r.lhs > 0.0 ? HUGE_VAL : 0.0);
  return r;
}

PoincareBatch poincare_batch(const Grid& g, double gamma, double M1, double M2, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0), P(0.0, 1.0);
  const double pi = std::acos(-1.0);
  double lx = g.length[0], ly = g.length[1];
  PoincareBatch out;
  int attempts = 0;
  while (out.samples < samples) {
    if (++attempts > 100 * samples) throw DomainError("Poincare sampling rejects almost every density");
    double a[3], b[4], c = U(rng), amp = P(rng) * P(rng);
    for (double& x : a) x = U(rng);
    for (double& x : b) x = U(rng);
    double target = M1 * (1.0 + 0.5 * P(rng));
    auto mode = [&](int m, double x, double y) {
      double cx = std::cos(m * pi * x / lx);
      return g.dim == 2 ? cx * std::cos((m % 2 + 1) * pi * y / ly) : cx;
    };
    ScalarField rho = ScalarField::from_function(g, [&](double x, double y) {
      double e = 0.0;
      for (int m = 1; m <= 3; ++m) e += a[m - 1] * mode(m, x, y);
      return std::exp(e);
    });
    rho *= target / integrate(rho);
    ScalarField v = ScalarField::from_function(g, [&](double x, double y) {
      double e = c;
      for (int m = 1; m <= 4; ++m) e += amp * b[m - 1] * mode(m, x, y) / m;
      return e;
    });
    PoincareResult r;
    try {
      r = weighted_poincare_check(rho, v, gamma, M1, M2);
    } catch (const DomainError&) {
      ++out.rejected;
      continue;
    }
    ++out.samples;
    out.sup_ratio = std::max(out.sup_ratio, r.ratio);
  }
  return out;
}

}  // namespace nslab
