#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "nslab/grid.hpp"

namespace nslab {

enum class Boundary { Neumann, Dirichlet };

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double value = 0.0) : grid_(grid), data_(grid.size(), value) {}
  ScalarField(const Grid& grid, std::vector<double> values) : grid_(grid), data_(std::move(values)) {
    if (data_.size() != grid_.size()) throw GridMismatch("value count does not match grid");
  }

  // Samples f at cell centres.
  static ScalarField from_function(const Grid& grid, const std::function<double(double, double)>& f) {
    ScalarField out(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      auto c = grid.center_of(k);
      out.data_[k] = f(c[0], c[1]);
    }
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }
  double& operator[](std::size_t k) { return data_[k]; }
  double operator[](std::size_t k) const { return data_[k]; }
  double& at(int i, int j = 0) { return data_[grid_.index(i, j)]; }
  double at(int i, int j = 0) const { return data_[grid_.index(i, j)]; }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  double min() const { return *std::min_element(data_.begin(), data_.end()); }
  double max() const { return *std::max_element(data_.begin(), data_.end()); }
  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  ScalarField& operator+=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  ScalarField& operator-=(const ScalarField& o) {
    require_same_grid(grid_, o.grid_);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  ScalarField& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

 private:
  Grid grid_;
  std::vector<double> data_;
};

inline ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
inline ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
inline ScalarField operator*(ScalarField a, double s) { return a *= s; }
inline ScalarField operator*(double s, ScalarField a) { return a *= s; }

// Cellwise map of one or two fields.
template <class F>
ScalarField map(const ScalarField& a, F&& f) {
  ScalarField out(a.grid());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = f(a[k]);
  return out;
}

template <class F>
ScalarField map(const ScalarField& a, const ScalarField& b, F&& f) {
  require_same_grid(a.grid(), b.grid());
  ScalarField out(a.grid());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = f(a[k], b[k]);
  return out;
}

// One component per spatial dimension. Velocities carry a zero trace on the
// boundary, realised through antireflected ghost cells in the operators.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& grid, double value = 0.0)
      : grid_(grid), comp_(static_cast<std::size_t>(grid.dim), ScalarField(grid, value)) {}

  const Grid& grid() const { return grid_; }
  int dim() const { return grid_.dim; }
  ScalarField& operator[](int a) { return comp_[static_cast<std::size_t>(a)]; }
  const ScalarField& operator[](int a) const { return comp_[static_cast<std::size_t>(a)]; }

  bool all_finite() const {
    return std::all_of(comp_.begin(), comp_.end(), [](const ScalarField& c) { return c.all_finite(); });
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& c : comp_)
      for (double v : c.values()) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  Grid grid_;
  std::vector<ScalarField> comp_;
};

// Cellwise d x d tensor, row-major, d <= 2.
struct TensorField {
  Grid grid;
  std::vector<std::array<double, 4>> values;

  double get(std::size_t k, int a, int b) const { return values[k][static_cast<std::size_t>(2 * a + b)]; }
};

}  // namespace nslab
