#include <doctest.h>

#include <cmath>
#include <random>

#include "nslab/constitutive.hpp"
#include "nslab/error.hpp"

using namespace nslab;

namespace {

ConstitutiveSet linear_rho2() {
  ConstitutiveSet cs = constitutive_preset("ideal-like");
  cs.p_e = ScalarLaw::power(1.0, 2.0);
  cs.constants.gamma = 2.0;
  return cs;
}

bool has_failure(const ValidationReport& r, const std::string& needle) {
  for (const auto& e : r.entries)
    if (!e.passed && e.name.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("pressure evaluation") {
  CHECK(pressure(linear_rho2(), 2.0, 3.0) == doctest::Approx(10.0));
  ConstitutiveSet split = constitutive_preset("general-split");
  CHECK(pressure(split, 4.0, 1.0) == doctest::Approx(18.0));
  for (const auto& name : constitutive_preset_names()) CHECK(pressure(constitutive_preset(name), 0.0, 5.0) == 0.0);
  CHECK_THROWS_AS(pressure(split, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(pressure(split, 1.0, -1.0), DomainError);
}

TEST_CASE("pressure is non-decreasing in temperature") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(0.0, 10.0);
  for (const auto& name : constitutive_preset_names()) {
    ConstitutiveSet cs = constitutive_preset(name);
    for (int i = 0; i < 200; ++i) {
      double r = d(rng), t1 = d(rng), t2 = d(rng);
      if (t1 > t2) std::swap(t1, t2);
      CHECK(pressure(cs, r, t1) <= pressure(cs, r, t2));
    }
  }
}

TEST_CASE("kappa primitive") {
  ConstitutiveSet cs = constitutive_preset("ideal-like");
  CHECK(kappa_primitive(cs, 2.0) == doctest::Approx(14.0 / 3.0));
  CHECK(kappa_primitive(cs, 0.0) == 0.0);
  cs.kappa = ScalarLaw::polynomial({2.0, 0.0, 2.0});
  CHECK(kappa_primitive(cs, 1.0) == doctest::Approx(8.0 / 3.0));

  // non-polynomial kappa goes through quadrature
  ConstitutiveSet q = constitutive_preset("ideal-like");
  q.kappa = ScalarLaw::custom([](double t) { return 1.0 + t * t + 0.5 * std::sin(t); });
  double t = 1.7;
  CHECK(kappa_primitive(q, t) == doctest::Approx(t + t * t * t / 3.0 + 0.5 * (1.0 - std::cos(t))).epsilon(1e-10));

  // bracketed by the integrated hypothesis bounds and increasing
  double prev = -1.0;
  for (double th = 0.0; th <= 10.0; th += 0.25) {
    double K = kappa_primitive(cs, th);
    CHECK(K > prev);
    prev = K;
    double base = th + th * th * th / 3.0;
    CHECK(K >= cs.constants.kappa_lo * base * (1 - 1e-12));
  }
}

TEST_CASE("elastic potential") {
  ConstitutiveSet cs = linear_rho2();
  CHECK(elastic_potential(cs, 2.0) == doctest::Approx(1.0));
  CHECK(elastic_potential(cs, 1.0) == 0.0);
  CHECK(elastic_potential(cs, 0.5) == doctest::Approx(-0.5));

  // midpoint rule as an independent oracle
  ConstitutiveSet c4 = constitutive_preset("ideal-like");
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(0.1, 10.0);
  for (int i = 0; i < 100; ++i) {
    double r = d(rng);
    const int n = 20000;
    double a = std::min(r, 1.0), b = std::max(r, 1.0), h = (b - a) / n, s = 0.0;
    for (int j = 0; j < n; ++j) {
      double z = a + (j + 0.5) * h;
      s += c4.p_e(z) / (z * z) * h;
    }
    if (r < 1.0) s = -s;
    CHECK(elastic_potential(c4, r) == doctest::Approx(s).epsilon(1e-8));
  }

  // rho P_e(rho) extends to zero density
  bool clamped = true;
  CHECK(std::abs(rho_elastic_potential(c4, 0.0, &clamped)) < 1e-7);
  CHECK_THROWS_AS(elastic_potential(c4, 1e-9), DomainError);
}

TEST_CASE("pressure decomposition") {
  ConstitutiveSet mono = linear_rho2();
  PressureDecomposition d = pe_decomposition(mono);
  for (std::size_t i = 0; i < d.rho.size(); ++i) {
    CHECK(d.p_b[i] == 0.0);
    CHECK(d.p_m[i] == doctest::Approx(mono.p_e(d.rho[i])));
  }

  ConstitutiveSet wiggle = linear_rho2();
  wiggle.p_e = ScalarLaw::custom([](double r) { return r * r - (r <= 1.0 ? std::sin(M_PI * r) : 0.0); });
  d = pe_decomposition(wiggle);
  CHECK(d.max_reconstruction_error <= 1e-12);
  double worst = 0.0;
  for (std::size_t i = 0; i < d.rho.size(); ++i) {
    worst = std::max(worst, std::abs(d.p_m[i] - d.p_b[i] - wiggle.p_e(d.rho[i])));
    CHECK(d.p_b[i] >= 0.0);
    if (i > 0) CHECK(d.p_m[i] >= d.p_m[i - 1]);
    if (d.rho[i] > 1.0) CHECK(d.p_b[i] == 0.0);
  }
  CHECK(worst <= 1e-12);
  CHECK(d.support_bound <= 1.0 + 1e-12);
  CHECK(d.p_b_law(0.5) > 0.0);
}

TEST_CASE("presets satisfy the hypotheses") {
  for (const auto& name : constitutive_preset_names()) {
    CAPTURE(name);
    ValidationReport r = validate_hypotheses(constitutive_preset(name), 5.0);
    CHECK(r.all_passed());
    CHECK(r.first_failure() == nullptr);
  }
  CHECK_THROWS_AS(constitutive_preset("steam"), DomainError);
}

TEST_CASE("validation failures are named with witnesses") {
  ConstitutiveSet cs = constitutive_preset("general-split");
  ValidationReport r = validate_hypotheses(cs, 4.0);
  CHECK(has_failure(r, "beta > max{4, gamma}"));

  cs.constants.gamma = 1.4;
  r = validate_hypotheses(cs, 5.0);
  CHECK(has_failure(r, "gamma > 3/2"));

  ConstitutiveSet lin = linear_rho2();
  r = validate_hypotheses(lin, 5.0);
  CHECK(has_failure(r, "gamma > 3"));

  ConstitutiveSet m = constitutive_preset("ideal-like");
  m.mu = ScalarLaw::polynomial({1.0, -0.1});
  SamplingOptions opt;
  opt.theta_max = 1.0;
  r = validate_hypotheses(m, 5.0, opt);
  CHECK(has_failure(r, "mu strictly increasing"));
  const ValidationEntry* f = r.first_failure();
  REQUIRE(f != nullptr);
  CHECK(!f->detail.empty());

  ConstitutiveSet k = constitutive_preset("ideal-like");
  k.kappa = ScalarLaw::polynomial({1.0, 0.0, 0.0, 1.0});
  CHECK(has_failure(validate_hypotheses(k, 5.0), "kappa"));
}

TEST_CASE("log sample grid") {
  auto g = log_sample_grid(100.0, 512);
  REQUIRE(g.size() == 512);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == doctest::Approx(1e-7));
  CHECK(g.back() == doctest::Approx(100.0));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}
