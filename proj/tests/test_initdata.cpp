#include <doctest.h>

#include <cmath>

#include "nslab/error.hpp"
#include "nslab/initdata.hpp"
#include "nslab/operators.hpp"

using namespace nslab;

namespace {

InitialData bump_data(const Grid& g, double amp) {
  InitialSpec s;
  s.rho = {"gaussian", 1.0, amp, 0.1};
  s.theta = {"gaussian", 0.5, 1.0, 0.15};
  s.velocity = {"bump", 0.3};
  s.theta_lo = 0.5;
  return make_initial_data(g, s);
}

ConstitutiveSet rho2_law() {
  ConstitutiveSet cs = constitutive_preset("ideal-like");
  cs.p_e = ScalarLaw::power(1.0, 2.0);
  return cs;
}

}  // namespace

TEST_CASE("clamp is the identity inside the admissible range") {
  Grid g = Grid::line(32);
  InitialData in;
  in.rho0 = ScalarField(g, 1.0);
  in.theta0 = ScalarField(g, 0.5);
  in.m0 = VectorField(g);
  in.theta_lo = 0.5;
  in.theta_hi = 2.0;
  RegularizedData r = regularize_initial_data(in, 0.01, 5.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(r.rho[k] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.theta[k] == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("regularized data respects the clamp bounds and selector") {
  Grid g = Grid::rectangle(24, 20);
  InitialData in = bump_data(g, 3.0);
  for (double delta : {0.1, 0.01, 0.001}) {
    RegularizedData r = regularize_initial_data(in, delta, 5.0);
    double top = std::pow(delta, -0.1);
    CHECK(r.rho.min() >= delta);
    CHECK(r.rho.max() <= top);
    CHECK(r.theta.min() >= 0.5);
    CHECK(r.theta.max() <= 1.01 * in.theta0.max());
    for (std::size_t k = 0; k < g.size(); ++k) {
      bool kept = r.m[0][k] == in.m0[0][k];
      CHECK((kept || r.m[0][k] == 0.0));
      CHECK(kept == (r.rho[k] >= in.rho0[k] || in.m0[0][k] == 0.0));
    }
    CHECK(boundary_normal_difference(r.rho) == 0.0);
    CHECK(boundary_normal_difference(r.theta) == 0.0);
  }
  CHECK_THROWS_AS(regularize_initial_data(in, 0.0, 5.0), DomainError);
  CHECK_THROWS_AS(regularize_initial_data(in, 1.0, 5.0), DomainError);
}

TEST_CASE("the set where the density is lowered shrinks with delta") {
  // With the smoothing radius tied to delta the lowered set vanishes once the
  // upper clamp exceeds max rho0 and the kernel collapses to one cell.
  Grid g = Grid::line(128);
  InitialData in = bump_data(g, 0.5);
  std::vector<double> measure;
  for (double delta : {0.1, 0.01, 0.001}) {
    RegularizedData r = regularize_initial_data(in, delta, 5.0, 20.0 * delta);
    double m = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (r.rho[k] < in.rho0[k]) m += g.cell_volume();
    measure.push_back(m);
  }
  CHECK(measure[0] > 0.0);
  CHECK(measure[1] <= measure[0]);
  CHECK(measure[2] == 0.0);
}

TEST_CASE("mollification converges as the radius shrinks") {
  Grid g = Grid::line(256);
  auto f = ScalarField::from_function(g, [](double x, double) { return std::exp(-40.0 * (x - 0.4) * (x - 0.4)); });
  auto err = [&](double r) {
    ScalarField m = mollify(f, r);
    double e = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) e += std::abs(m[k] - f[k]) * g.cell_volume();
    return e;
  };
  double order = std::log2(err(4.0) / err(2.0));
  CHECK(order >= 1.0);
  CHECK(std::abs(integrate(mollify(f, 3.0)) - integrate(f)) < 1e-12);
  CHECK(err(0.0) == 0.0);
}

TEST_CASE("initial energy") {
  Grid g = Grid::line(16);
  RegularizedData r;
  r.rho = ScalarField(g, 1.0);
  r.theta = ScalarField(g, 1.0);
  r.m = VectorField(g);
  CHECK(initial_energy(r, rho2_law(), 0.1, 5.0) == doctest::Approx(1.025));

  // theta = 0, m = 0 leaves the potential terms
  r.rho = ScalarField(g, 2.0);
  r.theta = ScalarField(g, 0.0);
  CHECK(initial_energy(r, rho2_law(), 0.1, 5.0) == doctest::Approx(0.1 / 4.0 * 32.0 + 2.0 * 1.0));
}

TEST_CASE("initial energy is bounded uniformly in delta") {
  Grid g = Grid::line(128);
  InitialData in = bump_data(g, 0.2);
  ConstitutiveSet cs = constitutive_preset("ideal-like");
  double lo = HUGE_VAL, hi = 0.0;
  for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
    double e = initial_energy(regularize_initial_data(in, delta, 5.0), cs, delta, 5.0);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  CHECK(hi / lo <= 1.05);
}

TEST_CASE("profiles and velocity presets") {
  Grid g = Grid::rectangle(16, 16);
  ScalarField c = make_profile(g, {"constant", 2.0, 0.0, 0.1});
  CHECK(c.min() == 2.0);
  ScalarField b = make_profile(g, {"two-bump", 1.0, 1.0, 0.1});
  CHECK(b.max() > 1.5);
  CHECK(b.min() >= 1.0);
  CHECK_THROWS_AS(make_profile(g, {"square", 1.0, 1.0, 0.1}), DomainError);
  InitialData in = bump_data(g, 0.5);
  // x-momentum vanishes toward every wall
  CHECK(std::abs(in.m0[0].at(0, 8)) < 0.05);
  CHECK(std::abs(in.m0[0].at(8, 0)) < 0.2);
  InitialSpec bad;
  bad.theta = {"constant", 0.4, 0.0, 0.1};
  bad.theta_lo = 0.5;
  CHECK_THROWS_AS(make_initial_data(g, bad), DomainError);
}
