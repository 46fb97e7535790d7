#include "nslab/law.hpp"

#include <cmath>
#include <sstream>

#include "nslab/error.hpp"
#include "nslab/quadrature.hpp"

namespace nslab {

ScalarLaw ScalarLaw::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  std::ostringstream name;
  name << "poly(";
  for (std::size_t k = 0; k < coeffs.size(); ++k) name << (k ? "," : "") << coeffs[k];
  name << ")";
  return ScalarLaw(Polynomial{std::move(coeffs)}, name.str());
}

ScalarLaw ScalarLaw::power(double scale, double exponent) {
  std::ostringstream name;
  name << scale << "*z^" << exponent;
  return ScalarLaw(Power{scale, exponent}, name.str());
}

ScalarLaw ScalarLaw::custom(std::function<double(double)> f, std::string name, std::function<double(double)> df,
                            std::function<double(double)> d2f) {
  return ScalarLaw(Custom{std::move(f), std::move(df), std::move(d2f)}, std::move(name));
}

double ScalarLaw::operator()(double z) const {
  if (auto* p = std::get_if<Polynomial>(&rep_)) {
    double s = 0.0;
    for (auto it = p->coeffs.rbegin(); it != p->coeffs.rend(); ++it) s = s * z + *it;
    return s;
  }
  if (auto* p = std::get_if<Power>(&rep_)) return z == 0.0 ? (p->exponent == 0.0 ? p->scale : 0.0) : p->scale * std::pow(z, p->exponent);
  return std::get<Custom>(rep_).f(z);
}

double ScalarLaw::derivative(double z) const {
  if (auto* p = std::get_if<Polynomial>(&rep_)) {
    double s = 0.0;
    for (std::size_t k = p->coeffs.size(); k-- > 1;) s = s * z + static_cast<double>(k) * p->coeffs[k];
    return s;
  }
  if (auto* p = std::get_if<Power>(&rep_)) {
    if (p->exponent == 0.0) return 0.0;
    if (z == 0.0) return p->exponent > 1.0 ? 0.0 : (p->exponent == 1.0 ? p->scale : HUGE_VAL);
    return p->scale * p->exponent * std::pow(z, p->exponent - 1.0);
  }
  const auto& c = std::get<Custom>(rep_);
  if (c.df) return c.df(z);
  double h = fd_step(z);
  return (c.f(z + h) - c.f(z - h)) / (2.0 * h);
}

double ScalarLaw::second_derivative(double z) const {
  if (auto* p = std::get_if<Polynomial>(&rep_)) {
    double s = 0.0;
    for (std::size_t k = p->coeffs.size(); k-- > 2;) s = s * z + static_cast<double>(k * (k - 1)) * p->coeffs[k];
    return s;
  }
  if (auto* p = std::get_if<Power>(&rep_)) {
    double e = p->exponent;
    if (e == 0.0 || e == 1.0) return 0.0;
    if (z == 0.0) return e > 2.0 ? 0.0 : (e == 2.0 ? 2.0 * p->scale : HUGE_VAL);
    return p->scale * e * (e - 1.0) * std::pow(z, e - 2.0);
  }
  const auto& c = std::get<Custom>(rep_);
  if (c.d2f) return c.d2f(z);
  double h = fd_step(z);
  if (c.df) return (c.df(z + h) - c.df(z - h)) / (2.0 * h);
  return (c.f(z + h) - 2.0 * c.f(z) + c.f(z - h)) / (h * h);
}

double ScalarLaw::primitive(double z) const {
  if (auto* p = std::get_if<Polynomial>(&rep_)) {
    double s = 0.0;
    for (std::size_t k = p->coeffs.size(); k-- > 0;) s = s * z + p->coeffs[k] / static_cast<double>(k + 1);
    return s * z;
  }
  if (auto* p = std::get_if<Power>(&rep_)) {
    if (p->exponent <= -1.0) throw QuadratureError("primitive from 0 diverges for exponent <= -1");
    return p->scale * std::pow(z, p->exponent + 1.0) / (p->exponent + 1.0);
  }
  const auto& f = std::get<Custom>(rep_).f;
  return integrate_adaptive(f, 0.0, z);
}

double ScalarLaw::potential(double z) const {
  if (!(z > 0.0)) throw DomainError("potential needs a positive argument");
  if (auto* p = std::get_if<Polynomial>(&rep_)) {
    // sum_k c_k \int_1^z s^{k-2} ds
    double s = 0.0;
    for (std::size_t k = 0; k < p->coeffs.size(); ++k) {
      double c = p->coeffs[k];
      if (c == 0.0) continue;
      if (k == 1) s += c * std::log(z);
      else {
        double e = static_cast<double>(k) - 1.0;
        s += c * (std::pow(z, e) - 1.0) / e;
      }
    }
    return s;
  }
  if (auto* p = std::get_if<Power>(&rep_)) {
    double e = p->exponent - 1.0;
    if (e == 0.0) return p->scale * std::log(z);
    return p->scale * (std::pow(z, e) - 1.0) / e;
  }
  const auto& f = std::get<Custom>(rep_).f;
  return integrate_adaptive([&](double s) { return f(s) / (s * s); }, 1.0, z);
}

}  // namespace nslab
