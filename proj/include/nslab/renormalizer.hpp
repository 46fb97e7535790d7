#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nslab/law.hpp"

namespace nslab {

struct RenormalizerSpec {
  enum class Family { InversePower, Xi, TruncatedInverse, Table, Custom };
  Family family = Family::InversePower;
  double l = 1.0;      // 1/(1+z)^l
  double xi = 0.5;     // xi/(xi+z)
  double omega = 1e-6; // 1/(z+omega) on {z+omega <= C}
  double C = 1.0;
  double table_step = 0.0;  // uniform nodes 0, step, 2 step, ...
  std::vector<double> table;
  ScalarLaw custom;

  static RenormalizerSpec inverse_power(double l);
  static RenormalizerSpec xi_family(double xi);
  static RenormalizerSpec truncated_inverse(double omega, double C);
  static RenormalizerSpec from_table(double step, std::vector<double> values);
  static RenormalizerSpec from_law(ScalarLaw h);
};

struct RenormalizerCheck {
  int points = 400;
  double z_max = 1e3;
  double tolerance = 1e-9;
};

// Weight h of the renormalized temperature inequality with H = \int_0 h and
// an admissibility verdict for monotonicity, 0 < h(0) < infinity, decay and
// h'' h >= 2 (h')^2 on a log-spaced sample grid.
class Renormalizer {
 public:
  double h(double z) const { return h_(z); }
  double dh(double z) const { return dh_(z); }
  double d2h(double z) const { return d2h_(z); }
  double H(double z) const { return H_(z); }
  // \int_0^theta kappa h
  double K_h(const ScalarLaw& kappa, double theta) const;

  // Level-set indicator of the truncated family (exact, not mollified); 1 otherwise.
  bool in_support(double z) const { return !truncated_ || z + omega_ <= C_; }

  bool admissible() const { return admissible_; }
  const std::string& violation() const { return violation_; }
  const std::string& name() const { return name_; }
  // max over samples of |h''h - 2h'^2| and min of h''h - 2h'^2, both divided by max(1, 2h'^2).
  double max_gap() const { return max_gap_; }
  double min_margin() const { return min_margin_; }

  friend Renormalizer make_renormalizer(const RenormalizerSpec& spec, const RenormalizerCheck& check);

 private:
  std::function<double(double)> h_, dh_, d2h_, H_;
  std::string name_;
  bool truncated_ = false;
  double omega_ = 0.0, C_ = 0.0, band_ = 0.0;
  bool admissible_ = false;
  std::string violation_;
  double max_gap_ = 0.0;
  double min_margin_ = 0.0;
};

Renormalizer make_renormalizer(const RenormalizerSpec& spec, const RenormalizerCheck& check = {});

}  // namespace nslab
