#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace nslab {

// A scalar material law z -> f(z) on z >= 0. Polynomial and power laws carry
// analytic derivatives and primitives; custom laws fall back to central
// differences and adaptive quadrature.
class ScalarLaw {
 public:
  struct Polynomial {
    std::vector<double> coeffs;  // c0 + c1 z + c2 z^2 + ...
  };
  struct Power {
    double scale;
    double exponent;  // scale * z^exponent
  };
  struct Custom {
    std::function<double(double)> f;
    std::function<double(double)> df;   // optional
    std::function<double(double)> d2f;  // optional
  };

  ScalarLaw() : ScalarLaw(constant(0.0)) {}

  static ScalarLaw polynomial(std::vector<double> coeffs);
  static ScalarLaw constant(double c) { return polynomial({c}); }
  static ScalarLaw power(double scale, double exponent);
  static ScalarLaw custom(std::function<double(double)> f, std::string name = "custom",
                          std::function<double(double)> df = {}, std::function<double(double)> d2f = {});

  double operator()(double z) const;
  double derivative(double z) const;
  double second_derivative(double z) const;
  // \int_0^z f
  double primitive(double z) const;
  // \int_1^z f(s)/s^2 ds, z > 0
  double potential(double z) const;

  bool is_polynomial() const { return std::holds_alternative<Polynomial>(rep_); }
  bool is_power() const { return std::holds_alternative<Power>(rep_); }
  const std::string& name() const { return name_; }

 private:
  ScalarLaw(std::variant<Polynomial, Power, Custom> rep, std::string name) : rep_(std::move(rep)), name_(std::move(name)) {}

  std::variant<Polynomial, Power, Custom> rep_;
  std::string name_;
};

// Central-difference step used when no analytic derivative is available.
inline double fd_step(double z) { return 1e-5 * (1.0 + (z < 0 ? -z : z)); }

}  // namespace nslab
