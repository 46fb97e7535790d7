#include "nslab/degiorgi.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <future>

#include "nslab/diagnostics.hpp"
#include "nslab/error.hpp"
#include "nslab/viscous.hpp"

namespace nslab {

void DeGiorgiConfig::validate() const {
  if (!(omega >= 0.0)) throw DomainError("omega must be non-negative");
  if (k_max < 1) throw DomainError("k_max must be >= 1");
  if (!(alpha > 1.0)) throw DomainError("alpha must exceed 1");
  if (!(beta_interp > 0.0 && beta_interp < 1.0)) throw DomainError("interpolation exponent must lie in (0, 1)");
  if (!(sigma() > 1.0)) throw DomainError("min((alpha + beta)/2, alpha) must exceed 1");
}

std::vector<double> geometric_schedule(double T1, int k_max) {
  std::vector<double> t;
  for (int k = 0; k <= k_max; ++k) t.push_back(T1 * (1.0 - std::ldexp(1.0, -k)));
  return t;
}

std::vector<double> level_sequence(double M, int k_max) {
  if (!(M > 0.0)) throw DomainError("level depth M must be positive");
  std::vector<double> c;
  for (int k = 0; k <= k_max; ++k) c.push_back(std::exp(-M * (1.0 - std::ldexp(1.0, -k))));
  return c;
}

double level_log_gap(double M, int k) {
  if (!(M > 0.0) || k < 1) throw DomainError("level gap needs M > 0 and k >= 1");
  return std::ldexp(M, -k);
}

Truncation truncation_phi(const ScalarField& theta, double C, double omega) {
  if (!(C > 0.0) || !(omega >= 0.0)) throw DomainError("truncation needs C > 0 and omega >= 0");
  const Grid& g = theta.grid();
  Truncation t{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
  for (std::size_t k = 0; k < g.size(); ++k) {
    double s = theta[k] + omega;
    if (!(s > 0.0)) throw DomainError("theta + omega vanishes; truncation is infinite");
    if (s <= C) {
      t.phi[k] = std::log(C / s);
      t.indicator[k] = 1.0;
      t.w_visc[k] = 1.0 / s;
      t.w_heat[k] = 1.0 / (s * s);
    }
  }
  return t;
}

double level_energy_U(const Trajectory& traj, int k, const DeGiorgiConfig& cfg, double M) {
  const auto& cs = traj.cs;
  const double d = traj.params.delta;
  double C = std::exp(-M * (1.0 - std::ldexp(1.0, -k)));
  double Tk = cfg.T_k(k);
  double sup_mass = 0.0;
  std::vector<double> t, diss;
  for (const auto& s : traj.snapshots) {
    if (s.t < Tk) continue;
    Truncation tr = truncation_phi(s.theta, C, cfg.omega);
    const Grid& g = s.rho.grid();
    double mass = 0.0, dv = 0.0, dh = 0.0;
    bool any = false;
    for (std::size_t c = 0; c < g.size(); ++c) {
      mass += (d + s.rho[c]) * tr.phi[c];
      any = any || tr.indicator[c] > 0.0;
    }
    if (any) {
      ScalarField mu = map(s.theta, [&](double v) { return cs.mu(v); });
      ScalarField lam = map(s.theta, [&](double v) { return cs.lambda(v); });
      ScalarField D2 = viscous_density(s.u, mu, lam).sym_sq;
      ScalarField G2 = grad_squared(s.theta, Boundary::Neumann);
      for (std::size_t c = 0; c < g.size(); ++c) {
        if (tr.indicator[c] == 0.0) continue;
        double th = s.theta[c];
        dv += cs.nu_at(th) * tr.w_visc[c] * D2[c];
        dh += cs.kappa(th) * tr.w_heat[c] * G2[c];
      }
    }
    double vol = g.cell_volume();
    sup_mass = std::max(sup_mass, mass * vol);
    t.push_back(s.t);
    diss.push_back(((1.0 - d) * dv + dh) * vol);
  }
  return sup_mass + (t.size() > 1 ? trapezoid(t, diss) : 0.0);
}

RecursionResult recursion_lemma(double U0, double C, double A, double b1, double b2, double K, int k_max) {
  if (!(b1 > 1.0) || !(b2 >= b1)) throw DomainError("recursion needs 1 < beta1 <= beta2");
  if (!(A >= 1.0) || !(C > 0.0) || !(K > 0.0)) throw DomainError("recursion needs A >= 1, C > 0, K > 0");
  if (!(U0 >= 0.0)) throw DomainError("U0 must be non-negative");
  if (k_max < 1) throw DomainError("k_max must be >= 1");
  RecursionResult r;
  r.sequence.push_back(U0);
  double u = U0;
  for (int k = 1; k <= k_max; ++k) {
    if (std::isfinite(u)) {
      u = C * std::pow(A, k) / K * (std::pow(u, b1) + std::pow(u, b2));
      if (!(u <= 1e300)) u = HUGE_VAL;
    }
    r.sequence.push_back(u);
  }
  r.converged = r.sequence.back() <= 1e-12;
  // geometric ansatz U_k <= U_0 b^(-k/(b1-1)), b = max(A, 2)
  r.K0 = U0 > 0.0 ? C * (1.0 + std::pow(U0, b2 - b1)) * std::pow(std::max(A, 2.0), b1 / (b1 - 1.0)) * std::pow(U0, b1 - 1.0)
                  : 0.0;
  return r;
}

DeGiorgiReport verify_recursion(const Trajectory& traj, const DeGiorgiConfig& cfg, double theta_lo) {
  cfg.validate();
  if (traj.snapshots.empty()) throw DomainError("empty trajectory");
  DeGiorgiReport rep;
  rep.M = cfg.M > 0.0 ? cfg.M : 2.0 * std::log(1.0 / theta_lo) + 1.0;
  if (!(rep.M > 0.0)) rep.M = 1.0;
  rep.omega = cfg.omega;
  rep.C = level_sequence(rep.M, cfg.k_max);
  for (int k = 0; k <= cfg.k_max; ++k) rep.T.push_back(cfg.T_k(k));

  std::vector<std::future<double>> jobs;
  for (int k = 0; k <= cfg.k_max; ++k)
    jobs.push_back(std::async(std::launch::async, [&traj, &cfg, &rep, k] { return level_energy_U(traj, k, cfg, rep.M); }));
  for (auto& j : jobs) rep.U.push_back(j.get());

  for (std::size_t k = 1; k < rep.U.size(); ++k)
    if (rep.U[k] > rep.U[k - 1] * (1.0 + 1e-12) + 1e-300) rep.monotone = false;

  // least squares: log U_k = c0 + k (alpha log 2) + sigma log U_{k-1}, k >= 2
  std::vector<int> ks;
  for (int k = 2; k <= cfg.k_max; ++k)
    if (rep.U[static_cast<std::size_t>(k)] > 0.0 && rep.U[static_cast<std::size_t>(k - 1)] > 0.0) ks.push_back(k);
  if (ks.size() >= 3) {
    Eigen::MatrixXd X(static_cast<long>(ks.size()), 3);
    Eigen::VectorXd y(static_cast<long>(ks.size()));
    for (std::size_t i = 0; i < ks.size(); ++i) {
      int k = ks[i];
      X(static_cast<long>(i), 0) = 1.0;
      X(static_cast<long>(i), 1) = k * std::log(2.0);
      X(static_cast<long>(i), 2) = std::log(rep.U[static_cast<std::size_t>(k - 1)]);
      y[static_cast<long>(i)] = std::log(rep.U[static_cast<std::size_t>(k)]);
    }
    Eigen::Vector3d c = X.colPivHouseholderQr().solve(y);
    rep.fit.available = c.allFinite();
    rep.fit.alpha = c[1];
    rep.fit.sigma = c[2];
    rep.fit.C = std::exp(c[0] + c[1] * std::log(rep.M));
    rep.fit.points = static_cast<int>(ks.size());
    rep.fit.rms = std::sqrt((X * c - y).squaredNorm() / static_cast<double>(ks.size()));
  }

  rep.converged = rep.U.back() <= cfg.certification_threshold;
  rep.empirical_only = std::exp(-0.5 * rep.M) >= theta_lo;
  if (rep.empirical_only)
    rep.warning = "exp(-M/2) >= theta_lo: initial truncation term may not vanish; certificate is empirical";
  rep.certified = rep.converged;
  if (rep.certified) rep.certificate = std::exp(-rep.M) - rep.omega;

  const ScalarField& th0 = traj.snapshots.front().theta;
  rep.initial_phi_vanishes = true;
  for (int k = 1; k <= cfg.k_max; ++k)
    if (truncation_phi(th0, rep.C[static_cast<std::size_t>(k)], rep.omega).phi.max() != 0.0) rep.initial_phi_vanishes = false;
  rep.observed_min_theta = HUGE_VAL;
  for (const auto& s : traj.snapshots) rep.observed_min_theta = std::min(rep.observed_min_theta, s.theta.min());
  return rep;
}

}  // namespace nslab
