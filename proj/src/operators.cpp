#include "nslab/operators.hpp"

#include <cmath>

namespace nslab {

namespace {

bool inside(const Grid& g, int i, int j) { return i >= 0 && i < g.cells[0] && j >= 0 && (g.dim == 1 ? j == 0 : j < g.cells[1]); }

}  // namespace

double neighbour(const ScalarField& f, int i, int j, int axis, int step, Boundary bc) {
  const Grid& g = f.grid();
  int ni = axis == 0 ? i + step : i;
  int nj = axis == 1 ? j + step : j;
  if (inside(g, ni, nj)) return f.at(ni, nj);
  double own = f.at(i, j);
  return bc == Boundary::Neumann ? own : -own;
}

VectorField grad(const ScalarField& f) {
  const Grid& g = f.grid();
  VectorField out(g);
  for (int a = 0; a < g.dim; ++a) {
    double inv = 1.0 / (2.0 * g.spacing(a));
    for (std::size_t k = 0; k < g.size(); ++k) {
      int i = g.ix(k), j = g.iy(k);
      out[a][k] = (neighbour(f, i, j, a, +1, Boundary::Neumann) - neighbour(f, i, j, a, -1, Boundary::Neumann)) * inv;
    }
  }
  return out;
}

ScalarField div(const VectorField& v) {
  const Grid& g = v.grid();
  ScalarField out(g);
  for (int a = 0; a < g.dim; ++a) {
    double inv = 1.0 / (2.0 * g.spacing(a));
    for (std::size_t k = 0; k < g.size(); ++k) {
      int i = g.ix(k), j = g.iy(k);
      out[k] += (neighbour(v[a], i, j, a, +1, Boundary::Dirichlet) - neighbour(v[a], i, j, a, -1, Boundary::Dirichlet)) * inv;
    }
  }
  return out;
}

FaceField face_grad(const ScalarField& f, Boundary bc) {
  const Grid& g = f.grid();
  FaceField out{g, {}};
  int ny = g.dim == 2 ? g.cells[1] : 1;
  int nx = g.cells[0];
  double hx = g.spacing(0);
  out.normal[0].assign(static_cast<std::size_t>((nx + 1) * ny), 0.0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      double d;
      if (i == 0) d = f.at(0, j) - neighbour(f, 0, j, 0, -1, bc);
      else if (i == nx) d = neighbour(f, nx - 1, j, 0, +1, bc) - f.at(nx - 1, j);
      else d = f.at(i, j) - f.at(i - 1, j);
      out.normal[0][out.face_index(0, i, j)] = d / hx;
    }
  if (g.dim == 2) {
    double hy = g.spacing(1);
    out.normal[1].assign(static_cast<std::size_t>(nx * (ny + 1)), 0.0);
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double d;
        if (j == 0) d = f.at(i, 0) - neighbour(f, i, 0, 1, -1, bc);
        else if (j == ny) d = neighbour(f, i, ny - 1, 1, +1, bc) - f.at(i, ny - 1);
        else d = f.at(i, j) - f.at(i, j - 1);
        out.normal[1][out.face_index(1, i, j)] = d / hy;
      }
  }
  return out;
}

ScalarField face_div(const FaceField& gf) {
  const Grid& g = gf.grid;
  ScalarField out(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    int i = g.ix(k), j = g.iy(k);
    double s = (gf.normal[0][gf.face_index(0, i + 1, j)] - gf.normal[0][gf.face_index(0, i, j)]) / g.spacing(0);
    if (g.dim == 2) s += (gf.normal[1][gf.face_index(1, i, j + 1)] - gf.normal[1][gf.face_index(1, i, j)]) / g.spacing(1);
    out[k] = s;
  }
  return out;
}

ScalarField laplacian(const ScalarField& f, Boundary bc) { return face_div(face_grad(f, bc)); }

ScalarField grad_squared(const ScalarField& f, Boundary bc) {
  const Grid& g = f.grid();
  FaceField gf = face_grad(f, bc);
  ScalarField out(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    int i = g.ix(k), j = g.iy(k);
    double l = gf.normal[0][gf.face_index(0, i, j)], r = gf.normal[0][gf.face_index(0, i + 1, j)];
    double s = 0.5 * (l * l + r * r);
    if (g.dim == 2) {
      double b = gf.normal[1][gf.face_index(1, i, j)], t = gf.normal[1][gf.face_index(1, i, j + 1)];
      s += 0.5 * (b * b + t * t);
    }
    out[k] = s;
  }
  return out;
}

TensorField sym_gradient(const VectorField& u) {
  const Grid& g = u.grid();
  TensorField out{g, std::vector<std::array<double, 4>>(g.size(), {0.0, 0.0, 0.0, 0.0})};
  // du[a][b] = d_b u_a
  std::array<std::array<ScalarField, 2>, 2> du;
  for (int a = 0; a < g.dim; ++a)
    for (int b = 0; b < g.dim; ++b) {
      ScalarField d(g);
      double inv = 1.0 / (2.0 * g.spacing(b));
      for (std::size_t k = 0; k < g.size(); ++k) {
        int i = g.ix(k), j = g.iy(k);
        d[k] = (neighbour(u[a], i, j, b, +1, Boundary::Dirichlet) - neighbour(u[a], i, j, b, -1, Boundary::Dirichlet)) * inv;
      }
      du[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = std::move(d);
    }
  for (std::size_t k = 0; k < g.size(); ++k)
    for (int a = 0; a < g.dim; ++a)
      for (int b = 0; b < g.dim; ++b)
        out.values[k][static_cast<std::size_t>(2 * a + b)] =
            0.5 * (du[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)][k] + du[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)][k]);
  return out;
}

double integrate(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().cell_volume();
}

double inner(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid());
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * g[k];
  return s * f.grid().cell_volume();
}

double inner(const VectorField& f, const VectorField& g) {
  require_same_grid(f.grid(), g.grid());
  double s = 0.0;
  for (int a = 0; a < f.dim(); ++a) s += inner(f[a], g[a]);
  return s;
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }
double l2_norm(const VectorField& f) { return std::sqrt(inner(f, f)); }

Eigen::SparseMatrix<double> laplacian_matrix(const Grid& g, Boundary bc) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(g.size() * 5);
  int n = static_cast<int>(g.size());
  for (int k = 0; k < n; ++k) {
    int i = g.ix(static_cast<std::size_t>(k)), j = g.iy(static_cast<std::size_t>(k));
    for (int a = 0; a < g.dim; ++a) {
      double w = 1.0 / (g.spacing(a) * g.spacing(a));
      for (int step : {-1, +1}) {
        int ni = a == 0 ? i + step : i;
        int nj = a == 1 ? j + step : j;
        if (inside(g, ni, nj)) {
          trip.emplace_back(k, static_cast<int>(g.index(ni, nj)), w);
          trip.emplace_back(k, k, -w);
        } else if (bc == Boundary::Dirichlet) {
          trip.emplace_back(k, k, -2.0 * w);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

double boundary_normal_difference(const ScalarField& f) {
  const Grid& g = f.grid();
  double m = 0.0;
  int nx = g.cells[0];
  int ny = g.dim == 2 ? g.cells[1] : 1;
  for (int j = 0; j < ny; ++j) {
    m = std::max(m, std::abs(f.at(1, j) - f.at(0, j)));
    m = std::max(m, std::abs(f.at(nx - 1, j) - f.at(nx - 2, j)));
  }
  if (g.dim == 2)
    for (int i = 0; i < nx; ++i) {
      m = std::max(m, std::abs(f.at(i, 1) - f.at(i, 0)));
      m = std::max(m, std::abs(f.at(i, ny - 1) - f.at(i, ny - 2)));
    }
  return m;
}

}  // namespace nslab
