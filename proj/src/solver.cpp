#include "nslab/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <cmath>
#include <sstream>

#include "nslab/error.hpp"
#include "nslab/viscous.hpp"

namespace nslab {

namespace {

constexpr double kMomentumRhoFloor = 1e-10;
constexpr double kNegativeSlack = 1e-12;

int ny_of(const Grid& g) { return g.dim == 2 ? g.cells[1] : 1; }

ScalarField law_on(const ScalarLaw& f, const ScalarField& x) {
  return map(x, [&](double v) { return f(v); });
}

// dp/drho + delta beta rho^(beta-1), clipped at zero
double sound_speed(const ConstitutiveSet& cs, const RegularizationParams& p, double rho, double theta) {
  double dth = cs.pressure_kind == PressureKind::GeneralSplit ? cs.p_theta.derivative(rho) : cs.R;
  double c2 = cs.p_e.derivative(rho) + theta * dth + p.delta * p.beta * std::pow(rho, p.beta - 1.0);
  return std::sqrt(std::max(c2, 0.0));
}

}  // namespace

void RegularizationParams::validate(const ConstitutiveSet& cs) const {
  if (!(epsilon >= 0.0) || !(eta >= 0.0)) throw DomainError("epsilon and eta must be non-negative");
  if (!(delta >= 0.0 && delta < 1.0)) throw DomainError("delta must lie in [0, 1)");
  if (!(beta > std::max(4.0, cs.gamma()))) throw DomainError("beta must exceed max{4, gamma}");
}

FluidState state_from(const RegularizedData& d) {
  FluidState s;
  s.rho = d.rho;
  s.theta = d.theta;
  s.u = VectorField(d.rho.grid());
  for (int a = 0; a < d.rho.grid().dim; ++a)
    for (std::size_t k = 0; k < d.rho.size(); ++k) s.u[a][k] = d.m[a][k] / d.rho[k];
  return s;
}

FaceField mass_flux(const ScalarField& rho, const VectorField& u) {
  const Grid& g = rho.grid();
  require_same_grid(g, u.grid());
  FaceField f{g, {}};
  int nx = g.cells[0], ny = ny_of(g);
  f.normal[0].assign(static_cast<std::size_t>((nx + 1) * ny), 0.0);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      double uf = 0.5 * (u[0].at(i - 1, j) + u[0].at(i, j));
      f.normal[0][f.face_index(0, i, j)] = uf * (uf > 0.0 ? rho.at(i - 1, j) : rho.at(i, j));
    }
  if (g.dim == 2) {
    f.normal[1].assign(static_cast<std::size_t>(nx * (ny + 1)), 0.0);
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double uf = 0.5 * (u[1].at(i, j - 1) + u[1].at(i, j));
        f.normal[1][f.face_index(1, i, j)] = uf * (uf > 0.0 ? rho.at(i, j - 1) : rho.at(i, j));
      }
  }
  return f;
}

ScalarField upwind_divergence(const FaceField& flux, const ScalarField& q) {
  const Grid& g = flux.grid;
  require_same_grid(g, q.grid());
  ScalarField out(g);
  int nx = g.cells[0], ny = ny_of(g);
  double hx = g.spacing(0);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      double F = flux.normal[0][flux.face_index(0, i, j)];
      double v = F * (F > 0.0 ? q.at(i - 1, j) : q.at(i, j)) / hx;
      out.at(i - 1, j) += v;
      out.at(i, j) -= v;
    }
  if (g.dim == 2) {
    double hy = g.spacing(1);
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double F = flux.normal[1][flux.face_index(1, i, j)];
        double v = F * (F > 0.0 ? q.at(i, j - 1) : q.at(i, j)) / hy;
        out.at(i, j - 1) += v;
        out.at(i, j) -= v;
      }
  }
  return out;
}

ScalarField flux_divergence(const FaceField& flux) { return upwind_divergence(flux, ScalarField(flux.grid, 1.0)); }

double stable_dt(const FluidState& s, const ConstitutiveSet& cs, const RegularizationParams& p, const DtPolicy& policy) {
  if (policy.kind == DtPolicy::Kind::Fixed) return policy.dt;
  const Grid& g = s.rho.grid();
  double hmin = g.spacing(0);
  if (g.dim == 2) hmin = std::min(hmin, g.spacing(1));
  double speed = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double vel = 0.0;
    for (int a = 0; a < g.dim; ++a) vel += std::abs(s.u[a][k]);
    speed = std::max(speed, vel + sound_speed(cs, p, s.rho[k], s.theta[k]));
  }
  double dt = policy.dt;
  if (speed > 0.0) dt = std::min(dt, policy.cfl * hmin / speed);
  if (policy.diffusive) {
    double tmax = s.theta.max(), rmin = s.rho.min();
    double nu = std::max({p.epsilon, p.eta + 2.0 * cs.mu(tmax) + std::abs(cs.lambda(tmax)), cs.kappa(tmax) / (p.delta + rmin)});
    if (nu > 0.0) dt = std::min(dt, policy.diffusive_factor * hmin * hmin / nu);
  }
  return dt;
}

Stepper::Stepper(const Grid& grid, ConstitutiveSet cs, RegularizationParams params, SolverOptions opt)
    : grid_(grid), cs_(std::move(cs)), p_(params), opt_(opt), lap_(laplacian_matrix(grid, Boundary::Neumann)) {}

Stepper::ContinuityResult Stepper::continuity(const FluidState& s, double dt) {
  ContinuityResult r{ScalarField(grid_), mass_flux(s.rho, s.u), 0};
  ScalarField dv = flux_divergence(r.flux);
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    double v = s.rho[k] - dt * dv[k];
    if (v < 0.0) {
      if (v < -kNegativeSlack) {
        std::ostringstream m;
        m << "density undershoot " << v << " at cell " << k << "; advective CFL number "
          << dt * s.u.max_abs() / grid_.spacing(0) << " too large";
        throw SolverError(m.str(), v, static_cast<std::ptrdiff_t>(k));
      }
      v = 0.0;
      ++r.clamped;
    }
    r.rho[k] = v;
  }
  if (p_.epsilon > 0.0) {
    double ed = p_.epsilon * dt;
    if (!diffusion_ || ed != cached_eps_dt_) {
      Eigen::SparseMatrix<double> I(static_cast<long>(grid_.size()), static_cast<long>(grid_.size()));
      I.setIdentity();
      diffusion_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(I - ed * lap_);
      cached_eps_dt_ = ed;
      if (diffusion_->info() != Eigen::Success) throw SolverError("density diffusion factorization failed");
    }
    Eigen::Map<const Eigen::VectorXd> rhs(r.rho.raw().data(), static_cast<long>(grid_.size()));
    Eigen::VectorXd x = diffusion_->solve(rhs);
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      double v = x[static_cast<long>(k)];
      if (v < 0.0) {
        if (v < -kNegativeSlack) throw SolverError("density diffusion produced a negative value", v, static_cast<std::ptrdiff_t>(k));
        v = 0.0;
        ++r.clamped;
      }
      r.rho[k] = v;
    }
  }
  return r;
}

VectorField Stepper::momentum(const FluidState& s, const ScalarField& rho_new, const FaceField& flux, double dt) {
  const Grid& g = grid_;
  const long n = static_cast<long>(g.size());
  const double vol = g.cell_volume();
  ScalarField mu = law_on(cs_.mu, s.theta), lam = law_on(cs_.lambda, s.theta);
  Eigen::SparseMatrix<double> A = viscous_matrix(g, mu, lam, p_.eta);
  for (int a = 0; a < g.dim; ++a)
    for (long k = 0; k < n; ++k)
      A.coeffRef(a * n + k, a * n + k) += std::max(rho_new[static_cast<std::size_t>(k)], kMomentumRhoFloor) * vol / dt;

  ScalarField P(g);
  for (std::size_t k = 0; k < g.size(); ++k)
    P[k] = pressure(cs_, rho_new[k], s.theta[k]) + p_.delta * std::pow(rho_new[k], p_.beta);
  VectorField gradP = grad(P);
  VectorField gradRho = grad(rho_new);

  Eigen::VectorXd b(g.dim * n);
  for (int a = 0; a < g.dim; ++a) {
    ScalarField conv = upwind_divergence(flux, s.u[a]);
    VectorField gu = grad(s.u[a]);
    // grad() reflects ghosts; velocity ghosts antireflect, so rebuild the centred differences
    for (int j = 0; j < g.dim; ++j) {
      double inv = 1.0 / (2.0 * g.spacing(j));
      for (std::size_t k = 0; k < g.size(); ++k) {
        int ix = g.ix(k), iy = g.iy(k);
        gu[j][k] = (neighbour(s.u[a], ix, iy, j, +1, Boundary::Dirichlet) - neighbour(s.u[a], ix, iy, j, -1, Boundary::Dirichlet)) * inv;
      }
    }
    for (std::size_t k = 0; k < g.size(); ++k) {
      double corr = 0.0;
      for (int j = 0; j < g.dim; ++j) corr += gu[j][k] * gradRho[j][k];
      double rhs = s.rho[k] * s.u[a][k] / dt - conv[k] - gradP[a][k] - p_.epsilon * corr;
      b[a * n + static_cast<long>(k)] = vol * rhs;
    }
  }

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(opt_.cg_tolerance);
  cg.setMaxIterations(opt_.cg_max_iterations);
  cg.compute(A);
  Eigen::VectorXd x = cg.solveWithGuess(b, pack(s.u));
  cg_iters_ = static_cast<int>(cg.iterations());
  if (cg.info() != Eigen::Success || !x.allFinite()) {
    std::ostringstream m;
    m << "momentum solve did not converge after " << cg.iterations() << " iterations (relative residual " << cg.error() << ")";
    throw SolverError(m.str(), cg.error());
  }
  return unpack(g, x);
}

ScalarField Stepper::temperature(const FluidState& s, const ScalarField& rho_new, const VectorField& u_new, const FaceField& flux,
                                 double dt, const ScalarField* heat_source) {
  const Grid& g = grid_;
  const std::size_t n = g.size();
  const double d = p_.delta;
  ScalarField mu = law_on(cs_.mu, s.theta), lam = law_on(cs_.lambda, s.theta);
  ScalarField Q = viscous_density(u_new, mu, lam).s_grad_u;
  ScalarField divu = div(u_new);
  ScalarField adv = upwind_divergence(flux, s.theta);

  Eigen::VectorXd a(static_cast<long>(n)), b(static_cast<long>(n));
  for (std::size_t k = 0; k < n; ++k) {
    double pth = cs_.thermal_coefficient(rho_new[k]);
    double dv = divu[k];
    double sink = dv > 0.0 ? pth * dv : 0.0;
    double source = dv < 0.0 ? -s.theta[k] * pth * dv : 0.0;
    double rhs = (d + s.rho[k]) * s.theta[k] - dt * adv[k] + dt * (1.0 - d) * Q[k] + dt * source;
    if (heat_source) rhs += dt * (*heat_source)[k];
    a[static_cast<long>(k)] = d + rho_new[k] + dt * sink;
    b[static_cast<long>(k)] = rhs;
  }

  Eigen::VectorXd th(static_cast<long>(n));
  for (std::size_t k = 0; k < n; ++k) th[static_cast<long>(k)] = std::max(s.theta[k], 0.0);
  Eigen::VectorXd K(static_cast<long>(n)), kap(static_cast<long>(n)), F(static_cast<long>(n));
  double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (!newton_) {
    newton_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
    newton_->analyzePattern(lap_);
  }
  Eigen::SparseMatrix<double> J = -dt * lap_;
  bool converged = false;
  int it = 0;
  for (; it < opt_.newton_max_iterations; ++it) {
    for (long k = 0; k < static_cast<long>(n); ++k) {
      K[k] = cs_.kappa.primitive(th[k]);
      kap[k] = cs_.kappa(th[k]);
    }
    Eigen::VectorXd lapK = lap_ * K;
    for (long k = 0; k < static_cast<long>(n); ++k)
      F[k] = a[k] * th[k] + dt * d * th[k] * th[k] * th[k] - dt * lapK[k] - b[k];
    // J dtheta = -F with J = diag(c) - dt Lap diag(kappa); solve for y = kappa dtheta
    J = -dt * lap_;
    for (long k = 0; k < static_cast<long>(n); ++k) {
      double c = a[k] + 3.0 * dt * d * th[k] * th[k];
      J.coeffRef(k, k) += c / kap[k];
    }
    newton_->factorize(J);
    if (newton_->info() != Eigen::Success) throw SolverError("temperature Newton factorization failed");
    Eigen::VectorXd y = newton_->solve(-F);
    Eigen::VectorXd step = y.cwiseQuotient(kap);
    double damp = 1.0;
    for (long k = 0; k < static_cast<long>(n); ++k)
      if (th[k] + step[k] < 0.0 && step[k] < 0.0) damp = std::min(damp, 0.9 * th[k] / -step[k]);
    th += damp * step;
    double tmax = std::max(1.0, th.cwiseAbs().maxCoeff());
    if (damp == 1.0 && step.cwiseAbs().maxCoeff() <= opt_.newton_tolerance * tmax &&
        F.cwiseAbs().maxCoeff() <= std::sqrt(opt_.newton_tolerance) * scale) {
      converged = true;
      ++it;
      break;
    }
  }
  newton_iters_ = it;
  if (!converged || !th.allFinite()) {
    for (long k = 0; k < static_cast<long>(n); ++k) {
      K[k] = cs_.kappa.primitive(std::max(th[k], 0.0));
    }
    Eigen::VectorXd lapK = lap_ * K;
    long worst = 0;
    double wv = -1.0;
    for (long k = 0; k < static_cast<long>(n); ++k) {
      double r = std::abs(a[k] * th[k] + dt * d * th[k] * th[k] * th[k] - dt * lapK[k] - b[k]);
      if (!(r <= wv)) {
        wv = r;
        worst = k;
      }
    }
    std::ostringstream m;
    m << "temperature Newton iteration diverged; largest residual " << wv << " at cell " << worst;
    throw SolverError(m.str(), wv, worst);
  }
  ScalarField out(g);
  clamped_theta_ = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double v = th[static_cast<long>(k)];
    if (v < 0.0) {
      if (v < -kNegativeSlack) throw SolverError("negative temperature after step", v, static_cast<std::ptrdiff_t>(k));
      v = 0.0;
      ++clamped_theta_;
    }
    out[k] = v;
  }
  return out;
}

ScalarField step_continuity(const FluidState& s, double epsilon, double dt) {
  RegularizationParams p;
  p.epsilon = epsilon;
  Stepper st(s.rho.grid(), constitutive_preset("ideal-like"), p);
  return st.continuity(s, dt).rho;
}

VectorField step_momentum(const FluidState& s, const ConstitutiveSet& cs, const RegularizationParams& p, double dt) {
  Stepper st(s.rho.grid(), cs, p);
  return st.momentum(s, s.rho, mass_flux(s.rho, s.u), dt);
}

ScalarField step_temperature(const FluidState& s, const ConstitutiveSet& cs, const RegularizationParams& p, double dt) {
  Stepper st(s.rho.grid(), cs, p);
  return st.temperature(s, s.rho, s.u, mass_flux(s.rho, s.u), dt);
}

EnergyParts energy_parts(const FluidState& s, const ConstitutiveSet& cs, double delta, double beta) {
  const Grid& g = s.rho.grid();
  ScalarField kin(g), ela(g), art(g), the(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    double r = s.rho[k], u2 = 0.0;
    for (int a = 0; a < g.dim; ++a) u2 += s.u[a][k] * s.u[a][k];
    kin[k] = 0.5 * r * u2;
    ela[k] = rho_elastic_potential(cs, r);
    art[k] = beta > 1.0 ? delta / (beta - 1.0) * std::pow(r, beta) : 0.0;
    the[k] = (delta + r) * s.theta[k];
  }
  return {integrate(kin), integrate(ela), integrate(art), integrate(the)};
}

namespace {

void record(EnergyLedger& L, const FluidState& s, const ConstitutiveSet& cs, const RegularizationParams& p, double dv, double de,
            double dc, double inj) {
  EnergyParts e = energy_parts(s, cs, p.delta, p.beta);
  L.time.push_back(s.t);
  L.kinetic.push_back(e.kinetic);
  L.elastic.push_back(e.elastic);
  L.artificial.push_back(e.artificial);
  L.thermal.push_back(e.thermal);
  L.diss_viscous.push_back(dv);
  L.diss_artificial.push_back(de);
  L.diss_cubic.push_back(dc);
  L.injected.push_back(inj);
}

}  // namespace

Trajectory simulate(const SimulationConfig& cfg) {
  cfg.params.validate(cfg.cs);
  if (!(cfg.horizon > 0.0)) throw DomainError("horizon must be positive");
  if (cfg.snapshot_every < 1) throw DomainError("snapshot_every must be >= 1");
  const Grid& g = cfg.init.rho.grid();
  Trajectory tr;
  tr.cs = cfg.cs;
  tr.params = cfg.params;
  FluidState s = state_from(cfg.init);
  tr.snapshots.push_back(s);
  record(tr.ledger, s, cfg.cs, cfg.params, 0.0, 0.0, 0.0, 0.0);

  Stepper st(g, cfg.cs, cfg.params, cfg.solver);
  ScalarField source(g, cfg.forcing.heat_source);
  const ScalarField* src = cfg.forcing.heat_source != 0.0 ? &source : nullptr;
  double dv = 0.0, de = 0.0, dc = 0.0, inj = 0.0;
  const double d = cfg.params.delta;
  long step = 0;
  bool stored_last = true;
  while (s.t < cfg.horizon * (1.0 - 1e-12) && step < cfg.max_steps) {
    double dt = std::min(stable_dt(s, cfg.cs, cfg.params, cfg.dt), cfg.horizon - s.t);
    // avoid a sliver of a final step
    if (cfg.horizon - (s.t + dt) < 1e-9 * dt) dt = cfg.horizon - s.t;
    try {
      auto c = st.continuity(s, dt);
      VectorField u = st.momentum(s, c.rho, c.flux, dt);
      ScalarField th = st.temperature(s, c.rho, u, c.flux, dt, src);
      ScalarField mu = law_on(cfg.cs.mu, s.theta), lam = law_on(cfg.cs.lambda, s.theta);
      ViscousDensity vd = viscous_density(u, mu, lam);
      FluidState next{s.t + dt, std::move(c.rho), std::move(u), std::move(th)};
      if (!next.rho.all_finite() || !next.u.all_finite() || !next.theta.all_finite())
        throw SolverError("non-finite values after step");
      tr.stats.clamped_density += c.clamped;
      tr.stats.clamped_temperature += st.last_clamped_temperature();
      tr.stats.max_newton_iterations = std::max(tr.stats.max_newton_iterations, st.last_newton_iterations());
      tr.stats.max_cg_iterations = std::max(tr.stats.max_cg_iterations, st.last_cg_iterations());
      tr.stats.dt_min = step == 0 ? dt : std::min(tr.stats.dt_min, dt);
      tr.stats.dt_max = std::max(tr.stats.dt_max, dt);
      if (step == 0) tr.first_dt = dt;
      dv += dt * d * integrate(vd.s_grad_u);
      de += dt * cfg.params.eta * integrate(vd.grad_sq);
      dc += dt * d * integrate(map(next.theta, [](double t) { return t * t * t; }));
      if (src) inj += dt * integrate(*src);
      s = std::move(next);
    } catch (const Error& e) {
      tr.failed = true;
      std::ostringstream m;
      m << "step " << step + 1 << " at t=" << s.t << ": " << e.what();
      tr.error = m.str();
      if (!stored_last) tr.snapshots.push_back(s);
      return tr;
    }
    ++step;
    tr.stats.steps = step;
    record(tr.ledger, s, cfg.cs, cfg.params, dv, de, dc, inj);
    stored_last = step % cfg.snapshot_every == 0;
    if (stored_last) tr.snapshots.push_back(s);
  }
  if (!stored_last) tr.snapshots.push_back(s);
  return tr;
}

}  // namespace nslab
