#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "nslab/degiorgi.hpp"
#include "nslab/error.hpp"

using namespace nslab;

namespace {

Trajectory frozen(const Grid& g, double rho, double theta, int n, double delta) {
  Trajectory tr;
  tr.cs = constitutive_preset("ideal-like");
  tr.params = {0.0, 0.0, delta, 5.0};
  for (int i = 0; i <= n; ++i) {
    FluidState s;
    s.t = 0.1 * i;
    s.rho = ScalarField(g, rho);
    s.theta = ScalarField(g, theta);
    s.u = VectorField(g);
    tr.snapshots.push_back(s);
  }
  tr.first_dt = 0.1;
  return tr;
}

Trajectory cold_spot_run() {
  Grid g = Grid::line(64);
  InitialSpec spec;
  spec.rho = {"gaussian", 1.0, 0.5, 0.1};
  spec.theta = {"gaussian", 0.5, 1.0, 0.1};
  spec.velocity = {"bump", 0.5};
  SimulationConfig c;
  c.cs = constitutive_preset("ideal-like");
  c.params = {0.01, 0.05, 0.01, 5.0};
  c.init = regularize_initial_data(make_initial_data(g, spec), 0.01, 5.0);
  c.horizon = 0.1;
  c.dt = {DtPolicy::Kind::Fixed, 1e-3};
  c.snapshot_every = 2;
  return simulate(c);
}

// Independent iteration of U_k = C A^k / K (U^b1 + U^b2).
bool iterate_converges(double U0, double C, double A, double b1, double b2, double K, int k_max) {
  long double u = U0;
  for (int k = 1; k <= k_max; ++k) {
    u = static_cast<long double>(C) * std::pow(static_cast<long double>(A), k) / K * (std::pow(u, b1) + std::pow(u, b2));
    if (!std::isfinite(static_cast<double>(u)) || u > 1e300L) return false;
  }
  return u <= 1e-12L;
}

}  // namespace

TEST_CASE("level sequence") {
  auto C = level_sequence(10.0, 60);
  CHECK(C.size() == 61);
  CHECK(C[0] == 1.0);
  CHECK(C[1] == doctest::Approx(6.7379e-3).epsilon(1e-4));
  for (int k = 1; k <= 60; ++k) {
    CHECK(C[k] < C[k - 1] * (1.0 + 1e-15));
    CHECK(C[k] >= std::exp(-10.0));
  }
  CHECK(C[60] == doctest::Approx(std::exp(-10.0)));
}

TEST_CASE("level gap identity") {
  const double eps = std::numeric_limits<double>::epsilon();
  for (double M : {1.0, 3.7, 10.0}) {
    auto C = level_sequence(M, 40);
    for (int k = 1; k <= 40; ++k) {
      double gap = level_log_gap(M, k);
      // ratio of rounded levels: condition number about 1/gap
      CHECK(std::abs(std::log(C[k - 1] / C[k]) / gap - 1.0) <= 8.0 * eps * (1.0 + M) / gap);
      for (double alpha : {1.5, 2.0, 3.0}) {
        double lhs = std::pow(gap, -alpha);
        double rhs = std::pow(2.0, k * alpha) / std::pow(M, alpha);
        CHECK(std::abs(lhs / rhs - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("truncation") {
  Grid g = Grid::line(8);
  Truncation t = truncation_phi(ScalarField(g, 0.5), 1.0, 0.0);
  CHECK(t.phi[3] == doctest::Approx(std::log(2.0)));
  CHECK(t.indicator[3] == 1.0);
  CHECK(t.w_visc[3] == doctest::Approx(2.0));
  CHECK(t.w_heat[3] == doctest::Approx(4.0));
  Truncation z = truncation_phi(ScalarField(g, 0.9), 1.0, 0.1);
  CHECK(z.phi.max() == 0.0);
  CHECK(z.phi.min() == 0.0);
  CHECK_THROWS_AS(truncation_phi(ScalarField(g, 0.0), 1.0, 0.0), DomainError);
}

TEST_CASE("truncation bound on random fields") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Grid g = Grid::rectangle(12, 12);
  double M = 6.0, omega = 1e-6;
  auto C = level_sequence(M, 12);
  for (int trial = 0; trial < 100; ++trial) {
    ScalarField th(g);
    for (std::size_t k = 0; k < th.size(); ++k) th[k] = std::exp(-M * U(rng));
    for (int k = 1; k <= 12; ++k) {
      Truncation cur = truncation_phi(th, C[k], omega), prev = truncation_phi(th, C[k - 1], omega);
      for (double alpha : {1.5, 2.0, 3.0}) {
        double f = std::pow(level_log_gap(M, k), -alpha);
        for (std::size_t j = 0; j < th.size(); ++j)
          REQUIRE(cur.indicator[j] <= f * std::pow(prev.phi[j], alpha) * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("level energy") {
  Grid g = Grid::line(16);
  DeGiorgiConfig cfg;
  cfg.omega = 0.01;
  cfg.k_max = 10;
  double M = 4.0;
  auto C = level_sequence(M, 10);

  Trajectory warm = frozen(g, 1.2, 1.5, 4, 0.1);
  for (int k = 0; k <= 10; ++k) CHECK(level_energy_U(warm, k, cfg, M) == 0.0);

  double th = 0.2;
  Trajectory cold = frozen(g, 1.2, th, 4, 0.1);
  for (int k = 0; k <= 10; ++k) {
    double closed = C[k] > th + cfg.omega ? (0.1 + 1.2) * std::log(C[k] / (th + cfg.omega)) : 0.0;
    CHECK(level_energy_U(cold, k, cfg, M) == doctest::Approx(closed).epsilon(1e-12));
  }

  Trajectory run = cold_spot_run();
  REQUIRE_FALSE(run.failed);
  double prev = HUGE_VAL;
  for (int k = 0; k <= 10; ++k) {
    double u = level_energy_U(run, k, cfg, M);
    CHECK(u <= prev);
    CHECK(u >= 0.0);
    prev = u;
  }
}

TEST_CASE("recursion lemma examples") {
  RecursionResult r = recursion_lemma(1.0, 1.0, 2.0, 2.0, 2.0, 8.0, 60);
  CHECK(r.sequence[1] == doctest::Approx(0.5));
  CHECK(r.sequence[2] == doctest::Approx(0.25));
  CHECK(r.converged);
  CHECK(r.sequence.back() < 1e-12);

  RecursionResult d = recursion_lemma(1.0, 1.0, 2.0, 2.0, 2.0, 1.0, 60);
  CHECK_FALSE(d.converged);
  for (double u : d.sequence) CHECK(u >= 1.0);

  RecursionResult z = recursion_lemma(0.0, 1.0, 2.0, 2.0, 3.0, 1.0, 20);
  for (double u : z.sequence) CHECK(u == 0.0);
  CHECK(z.converged);

  CHECK_THROWS_AS(recursion_lemma(1.0, 1.0, 2.0, 1.0, 2.0, 8.0, 10), DomainError);
  CHECK_THROWS_AS(recursion_lemma(1.0, 1.0, 2.0, 3.0, 2.0, 8.0, 10), DomainError);
}

TEST_CASE("recursion lemma against direct iteration and K0") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int k_max = 200;
  for (int trial = 0; trial < 100; ++trial) {
    double C = 0.1 + 2.0 * U(rng), A = 1.0 + 3.0 * U(rng);
    double b1 = 1.1 + U(rng), b2 = b1 + U(rng);
    double U0 = 0.05 + 0.95 * U(rng);
    double K = std::exp(8.0 * U(rng) - 2.0);
    RecursionResult r = recursion_lemma(U0, C, A, b1, b2, K, k_max);
    CAPTURE(trial);
    CHECK(r.converged == iterate_converges(U0, C, A, b1, b2, K, k_max));
    CHECK(recursion_lemma(U0, C, A, b1, b2, 1.01 * r.K0, k_max).converged);
  }
}

TEST_CASE("recursion convergence is monotone in K") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    double C = 0.1 + 2.0 * U(rng), A = 1.0 + 3.0 * U(rng);
    double b1 = 1.1 + U(rng), b2 = b1 + U(rng), U0 = 0.05 + 0.95 * U(rng);
    double lo = 1e-3, hi = recursion_lemma(U0, C, A, b1, b2, 1.0, 10).K0 * 2.0 + 1.0;
    REQUIRE(recursion_lemma(U0, C, A, b1, b2, hi, 200).converged);
    for (int it = 0; it < 40; ++it) {
      double mid = std::sqrt(lo * hi);
      (recursion_lemma(U0, C, A, b1, b2, mid, 200).converged ? hi : lo) = mid;
    }
    for (double f : {1.001, 1.1, 2.0, 10.0, 1e3}) CHECK(recursion_lemma(U0, C, A, b1, b2, hi * f, 200).converged);
  }
}

TEST_CASE("verify recursion on a warm trajectory") {
  Grid g = Grid::line(16);
  Trajectory tr = frozen(g, 1.0, 0.5, 4, 0.01);
  DeGiorgiConfig cfg;
  cfg.M = 10.0;
  cfg.omega = 1e-6;
  cfg.k_max = 30;
  DeGiorgiReport r = verify_recursion(tr, cfg, 0.5);
  CHECK(r.U[0] > 0.0);
  for (int k = 1; k <= 30; ++k) CHECK(r.U[k] == 0.0);
  CHECK(r.monotone);
  CHECK(r.converged);
  CHECK(r.certified);
  CHECK_FALSE(r.empirical_only);
  CHECK(r.initial_phi_vanishes);
  CHECK(r.certificate == doctest::Approx(std::exp(-10.0) - 1e-6));
  CHECK(r.observed_min_theta >= r.certificate);

  cfg.M = 1.0;  // e^{-1/2} > 0.5
  DeGiorgiReport e = verify_recursion(tr, cfg, 0.5);
  CHECK(e.empirical_only);
  CHECK_FALSE(e.warning.empty());
}

TEST_CASE("geometric schedule") {
  auto T = geometric_schedule(2.0, 5);
  CHECK(T[0] == 0.0);
  CHECK(T[1] == doctest::Approx(1.0));
  CHECK(T[5] == doctest::Approx(2.0 * (1.0 - 1.0 / 32.0)));
}
