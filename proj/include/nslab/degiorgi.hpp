#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nslab/solver.hpp"

namespace nslab {

struct DeGiorgiConfig {
  double M = 0.0;       // level depth; <= 0 picks 2 ln(1/theta_lo) + 1
  double omega = 1e-6;  // temperature shift
  int k_max = 30;
  std::vector<double> T;  // time schedule T_k; empty means all zero
  double alpha = 2.0;
  double beta_interp = 0.5;
  double certification_threshold = 1e-10;

  double sigma() const { return std::min(0.5 * (alpha + beta_interp), alpha); }
  // Hoelder exponents of the interpolation step; informational only.
  double hoelder_p() const { return 2.0 / (alpha - beta_interp); }
  double hoelder_q() const { return 6.0 / (alpha + 5.0 * beta_interp); }
  void validate() const;
  double T_k(int k) const { return T.empty() ? 0.0 : T[static_cast<std::size_t>(std::min<int>(k, static_cast<int>(T.size()) - 1))]; }
};

// T_k = T1 (1 - 2^-k), k = 0..k_max
std::vector<double> geometric_schedule(double T1, int k_max);

// C_k = exp(-M (1 - 2^-k)), k = 0..k_max
std::vector<double> level_sequence(double M, int k_max);

// ln(C_{k-1}/C_k) = M 2^-k in closed form; the ratio of stored levels loses about k bits.
double level_log_gap(double M, int k);

struct Truncation {
  ScalarField phi;        // max(ln(C/(theta+omega)), 0)
  ScalarField indicator;  // 1 on {theta + omega <= C}
  ScalarField w_visc;     // indicator / (theta + omega)
  ScalarField w_heat;     // indicator / (theta + omega)^2
};

Truncation truncation_phi(const ScalarField& theta, double C, double omega);

// sup_t \int (delta+rho) phi_k + (1-delta) \int\int nu/(theta+omega) 1 |D u|^2
//   + \int\int kappa/(theta+omega)^2 1 |grad theta|^2, over snapshots with t >= T_k.
double level_energy_U(const Trajectory& traj, int k, const DeGiorgiConfig& cfg, double M);

struct RecursionResult {
  std::vector<double> sequence;  // U_0 .. U_kmax
  bool converged = false;        // U_kmax <= 1e-12
  double K0 = 0.0;               // K > K0 guarantees U_k -> 0
};

// U_k = C A^k / K (U_{k-1}^b1 + U_{k-1}^b2)
RecursionResult recursion_lemma(double U0, double C, double A, double b1, double b2, double K, int k_max);

struct RecursionFit {
  bool available = false;
  double C = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;
  int points = 0;
  double rms = 0.0;
};

struct DeGiorgiReport {
  double M = 0.0;
  double omega = 0.0;
  std::vector<double> C;
  std::vector<double> T;
  std::vector<double> U;
  RecursionFit fit;
  bool monotone = true;
  bool converged = false;
  bool certified = false;
  bool empirical_only = false;  // e^{-M/2} >= theta_lo: initial term may not vanish
  double certificate = 0.0;     // lower bound e^{-M} - omega
  double observed_min_theta = 0.0;
  bool initial_phi_vanishes = false;  // phi_{k,omega}(theta_0) == 0 for all k >= 1
  std::string warning;
};

DeGiorgiReport verify_recursion(const Trajectory& traj, const DeGiorgiConfig& cfg, double theta_lo);

}  // namespace nslab
