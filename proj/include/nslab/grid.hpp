#pragma once

#include <array>
#include <cstddef>

#include "nslab/error.hpp"

namespace nslab {

// Uniform cell-centred grid on [0, L_x] (x [0, L_y]).
struct Grid {
  int dim = 1;
  std::array<int, 2> cells{8, 1};
  std::array<double, 2> length{1.0, 1.0};

  static Grid line(int n, double length = 1.0) {
    Grid g;
    g.dim = 1;
    g.cells = {n, 1};
    g.length = {length, 1.0};
    g.validate();
    return g;
  }

  static Grid rectangle(int nx, int ny, double lx = 1.0, double ly = 1.0) {
    Grid g;
    g.dim = 2;
    g.cells = {nx, ny};
    g.length = {lx, ly};
    g.validate();
    return g;
  }

  void validate() const {
    if (dim != 1 && dim != 2) throw DomainError("grid dimension must be 1 or 2");
    for (int a = 0; a < dim; ++a) {
      if (cells[a] < 8) throw DomainError("grid needs at least 8 cells per axis");
      if (!(length[a] > 0.0)) throw DomainError("grid extent must be positive");
    }
  }

  double spacing(int axis) const { return length[axis] / cells[axis]; }
  std::size_t size() const {
    return static_cast<std::size_t>(cells[0]) * static_cast<std::size_t>(dim == 2 ? cells[1] : 1);
  }
  double cell_volume() const { return dim == 2 ? spacing(0) * spacing(1) : spacing(0); }
  double volume() const { return dim == 2 ? length[0] * length[1] : length[0]; }

  // Row-major: x varies fastest.
  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(cells[0]) + static_cast<std::size_t>(i);
  }
  int ix(std::size_t k) const { return static_cast<int>(k % static_cast<std::size_t>(cells[0])); }
  int iy(std::size_t k) const { return static_cast<int>(k / static_cast<std::size_t>(cells[0])); }

  double center(int axis, int i) const { return (i + 0.5) * spacing(axis); }
  std::array<double, 2> center_of(std::size_t k) const {
    return {center(0, ix(k)), dim == 2 ? center(1, iy(k)) : 0.0};
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    if (a.dim != b.dim) return false;
    for (int ax = 0; ax < a.dim; ++ax)
      if (a.cells[ax] != b.cells[ax] || a.length[ax] != b.length[ax]) return false;
    return true;
  }
};

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw GridMismatch("fields live on different grids");
}

}  // namespace nslab
