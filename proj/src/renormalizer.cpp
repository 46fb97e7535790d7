#include "nslab/renormalizer.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <memory>
#include <sstream>

#include "nslab/constitutive.hpp"
#include "nslab/error.hpp"
#include "nslab/quadrature.hpp"

namespace nslab {

RenormalizerSpec RenormalizerSpec::inverse_power(double l) {
  RenormalizerSpec s;
  s.family = Family::InversePower;
  s.l = l;
  return s;
}

RenormalizerSpec RenormalizerSpec::xi_family(double xi) {
  RenormalizerSpec s;
  s.family = Family::Xi;
  s.xi = xi;
  return s;
}

RenormalizerSpec RenormalizerSpec::truncated_inverse(double omega, double C) {
  RenormalizerSpec s;
  s.family = Family::TruncatedInverse;
  s.omega = omega;
  s.C = C;
  return s;
}

RenormalizerSpec RenormalizerSpec::from_table(double step, std::vector<double> values) {
  RenormalizerSpec s;
  s.family = Family::Table;
  s.table_step = step;
  s.table = std::move(values);
  return s;
}

RenormalizerSpec RenormalizerSpec::from_law(ScalarLaw h) {
  RenormalizerSpec s;
  s.family = Family::Custom;
  s.custom = std::move(h);
  return s;
}

double Renormalizer::K_h(const ScalarLaw& kappa, double theta) const {
  if (theta < 0.0) throw DomainError("K_h needs theta >= 0");
  if (theta == 0.0) return 0.0;
  auto f = [&](double z) { return kappa(z) * h_(z); };
  if (!truncated_) return integrate_adaptive(f, 0.0, theta);
  // split at the cutoff band so the quadrature sees smooth pieces
  double lo = C_ - omega_ - band_, hi = C_ - omega_ + band_;
  double s = 0.0, a = 0.0;
  for (double b : {lo, hi, theta}) {
    b = std::min(b, theta);
    if (b > a) {
      // the band is narrow and the integrand smooth on it; a fixed rule is exact to roundoff
      s += a >= lo && b <= hi ? boost::math::quadrature::gauss<double, 30>::integrate(f, a, b)
                              : integrate_adaptive(f, a, b, 1e-10, 1e-14);
      a = b;
    }
  }
  return s;
}

namespace {

// C^1 step: 1 for x <= -1, 0 for x >= 1.
double smooth_cut(double x) {
  if (x <= -1.0) return 1.0;
  if (x >= 1.0) return 0.0;
  double s = 0.5 * (x + 1.0);
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

double smooth_cut_d(double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  double s = 0.5 * (x + 1.0);
  return -3.0 * s * (1.0 - s);
}

double smooth_cut_d2(double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  double s = 0.5 * (x + 1.0);
  return -1.5 * (1.0 - 2.0 * s);
}

}  // namespace

Renormalizer make_renormalizer(const RenormalizerSpec& spec, const RenormalizerCheck& check) {
  using F = RenormalizerSpec::Family;
  Renormalizer r;
  std::ostringstream name;
  bool need_quadrature_H = false;
  switch (spec.family) {
    case F::InversePower: {
      double l = spec.l;
      if (!(l > 0.0)) throw DomainError("inverse power family needs l > 0");
      r.h_ = [l](double z) { return std::pow(1.0 + z, -l); };
      r.dh_ = [l](double z) { return -l * std::pow(1.0 + z, -l - 1.0); };
      r.d2h_ = [l](double z) { return l * (l + 1.0) * std::pow(1.0 + z, -l - 2.0); };
      if (l == 1.0) r.H_ = [](double z) { return std::log1p(z); };
      else r.H_ = [l](double z) { return (std::pow(1.0 + z, 1.0 - l) - 1.0) / (1.0 - l); };
      name << "1/(1+z)^" << l;
      break;
    }
    case F::Xi: {
      double xi = spec.xi;
      if (!(xi > 0.0)) throw DomainError("xi family needs xi > 0");
      r.h_ = [xi](double z) { return xi / (xi + z); };
      r.dh_ = [xi](double z) { return -xi / ((xi + z) * (xi + z)); };
      r.d2h_ = [xi](double z) { return 2.0 * xi / ((xi + z) * (xi + z) * (xi + z)); };
      r.H_ = [xi](double z) { return xi * std::log1p(z / xi); };
      name << "xi/(xi+z), xi=" << xi;
      break;
    }
    case F::TruncatedInverse: {
      double w = spec.omega, C = spec.C;
      if (!(w > 0.0) || !(C > w)) throw DomainError("truncated family needs 0 < omega < C");
      double half = 0.5e-3 * C;  // mollification width 1e-3 C
      r.truncated_ = true;
      r.omega_ = w;
      r.C_ = C;
      r.band_ = half;
      auto x = [w, C, half](double z) { return (z + w - C) / half; };
      r.h_ = [=](double z) { return smooth_cut(x(z)) / (z + w); };
      r.dh_ = [=](double z) {
        double a = z + w;
        return -smooth_cut(x(z)) / (a * a) + smooth_cut_d(x(z)) / (half * a);
      };
      r.d2h_ = [=](double z) {
        double a = z + w;
        return 2.0 * smooth_cut(x(z)) / (a * a * a) - 2.0 * smooth_cut_d(x(z)) / (half * a * a) +
               smooth_cut_d2(x(z)) / (half * half * a);
      };
      auto hf = r.h_;
      r.H_ = [=](double z) {
        double edge = C - half - w;
        if (z <= edge) return std::log((z + w) / w);
        double top = std::min(z, C + half - w);
        return std::log((edge + w) / w) + boost::math::quadrature::gauss<double, 30>::integrate(hf, edge, top);
      };
      name << "1/(z+omega) on {z+omega<=C}, omega=" << w << ", C=" << C;
      break;
    }
    case F::Table: {
      if (spec.table.size() < 4 || !(spec.table_step > 0.0)) throw DomainError("table renormalizer needs >= 4 nodes");
      auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
          spec.table.begin(), spec.table.end(), 0.0, spec.table_step);
      double end = spec.table_step * static_cast<double>(spec.table.size() - 1);
      // beyond the last node: v/(1 + q(z - end)), matching value and slope there;
      // this tail is the equality case of h''h >= 2h'^2 and decays whenever the table does
      double v = spec.table.back(), q = v > 0.0 ? std::max(0.0, -spline->prime(end) / v) : 0.0;
      r.h_ = [spline, end, v, q](double z) { return z >= end ? v / (1.0 + q * (z - end)) : (*spline)(z); };
      r.dh_ = [spline, end, v, q](double z) {
        if (z < end) return spline->prime(z);
        double a = 1.0 + q * (z - end);
        return -v * q / (a * a);
      };
      r.d2h_ = [spline, end, v, q](double z) {
        if (z < end) return spline->double_prime(z);
        double a = 1.0 + q * (z - end);
        return 2.0 * v * q * q / (a * a * a);
      };
      need_quadrature_H = true;
      name << "table(" << spec.table.size() << " nodes)";
      break;
    }
    case F::Custom: {
      ScalarLaw law = spec.custom;
      r.h_ = [law](double z) { return law(z); };
      r.dh_ = [law](double z) { return law.derivative(z); };
      r.d2h_ = [law](double z) { return law.second_derivative(z); };
      need_quadrature_H = true;
      name << law.name();
      break;
    }
  }
  if (need_quadrature_H) {
    auto hf = r.h_;
    r.H_ = [hf](double z) { return z <= 0.0 ? 0.0 : integrate_adaptive(hf, 0.0, z, 1e-10, 1e-14); };
  }
  r.name_ = name.str();

  // admissibility
  auto grid = log_sample_grid(check.z_max, check.points);
  std::string fail;
  double h0 = r.h_(0.0);
  if (!(h0 > 0.0) || !std::isfinite(h0)) fail = "0 < h(0) < infinity";
  r.max_gap_ = 0.0;
  r.min_margin_ = HUGE_VAL;
  for (std::size_t k = 0; k < grid.size() && fail.empty(); ++k) {
    double z = grid[k];
    if (k > 0 && r.h_(z) > r.h_(grid[k - 1]) + 1e-14 * std::abs(h0)) {
      std::ostringstream m;
      m << "h non-increasing (fails at z=" << z << ")";
      fail = m.str();
      break;
    }
    if (r.truncated_ && std::abs(z + r.omega_ - r.C_) <= r.band_) continue;
    double hv = r.h_(z), d1 = r.dh_(z), d2 = r.d2h_(z);
    // relative to the size of the two sides, so that steep weights are not
    // judged on cancellation noise
    double margin = (d2 * hv - 2.0 * d1 * d1) / std::max(1.0, 2.0 * d1 * d1);
    r.max_gap_ = std::max(r.max_gap_, std::abs(margin));
    r.min_margin_ = std::min(r.min_margin_, margin);
    if (margin < -check.tolerance) {
      std::ostringstream m;
      m << "h''h >= 2(h')^2 (fails at z=" << z << " by " << -margin << ")";
      fail = m.str();
    }
  }
  if (fail.empty()) {
    double zt = check.z_max;
    double ht = r.h_(zt);
    bool decays = ht == 0.0 || (ht > 0.0 && zt * r.dh_(zt) / ht < -1e-6 && ht < h0);
    if (!decays) fail = "h(z) -> 0 as z -> infinity";
  }
  r.admissible_ = fail.empty();
  r.violation_ = fail;
  return r;
}

}  // namespace nslab
