#include "nslab/viscous.hpp"

#include <array>

namespace nslab {

namespace {

// One entry of a one-sided gradient: coef_self * u(c) + coef_nb * u(nb).
struct Diff {
  long self = 0;
  long nb = -1;  // -1: wall ghost, no neighbour term
  double c_self = 0.0;
  double c_nb = 0.0;
};

Diff one_sided(const Grid& g, std::size_t k, int axis, int dir) {
  int i = g.ix(k), j = g.iy(k);
  int ni = axis == 0 ? i + dir : i, nj = axis == 1 ? j + dir : j;
  int n_axis = g.cells[static_cast<std::size_t>(axis)];
  int pos = axis == 0 ? ni : nj;
  double inv = 1.0 / g.spacing(axis);
  Diff d;
  d.self = static_cast<long>(k);
  if (pos < 0 || pos >= n_axis) {
    // ghost value -u(c): forward (-u - u)/h, backward (u + u)/h
    d.c_self = -2.0 * dir * inv;
    return d;
  }
  d.nb = static_cast<long>(g.index(ni, nj));
  d.c_self = -dir * inv;
  d.c_nb = dir * inv;
  return d;
}

double apply(const Diff& d, const ScalarField& f) {
  double v = d.c_self * f[static_cast<std::size_t>(d.self)];
  if (d.nb >= 0) v += d.c_nb * f[static_cast<std::size_t>(d.nb)];
  return v;
}

int combos(const Grid& g) { return g.dim == 2 ? 4 : 2; }

std::array<int, 2> directions(int s) { return {(s & 1) ? -1 : 1, (s & 2) ? -1 : 1}; }

}  // namespace

ViscousDensity viscous_density(const VectorField& u, const ScalarField& mu, const ScalarField& lambda) {
  const Grid& g = u.grid();
  require_same_grid(g, mu.grid());
  require_same_grid(g, lambda.grid());
  ViscousDensity out{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
  int d = g.dim, nc = combos(g);
  double w = 1.0 / nc;
  for (std::size_t k = 0; k < g.size(); ++k) {
    double s_acc = 0.0, gsq = 0.0, dsq = 0.0, divsq = 0.0;
    for (int s = 0; s < nc; ++s) {
      auto dir = directions(s);
      double gr[2][2] = {{0, 0}, {0, 0}};
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) gr[a][b] = apply(one_sided(g, k, b, dir[static_cast<std::size_t>(b)]), u[a]);
      double sym = 0.0, full = 0.0, tr = 0.0;
      for (int a = 0; a < d; ++a) {
        tr += gr[a][a];
        for (int b = 0; b < d; ++b) {
          double e = 0.5 * (gr[a][b] + gr[b][a]);
          sym += e * e;
          full += gr[a][b] * gr[a][b];
        }
      }
      s_acc += 2.0 * mu[k] * sym + lambda[k] * tr * tr;
      gsq += full;
      dsq += sym;
      divsq += tr * tr;
    }
    out.s_grad_u[k] = w * s_acc;
    out.grad_sq[k] = w * gsq;
    out.sym_sq[k] = w * dsq;
    out.div_sq[k] = w * divsq;
  }
  return out;
}

Eigen::SparseMatrix<double> viscous_matrix(const Grid& g, const ScalarField& mu, const ScalarField& lambda, double eta) {
  require_same_grid(g, mu.grid());
  require_same_grid(g, lambda.grid());
  const int d = g.dim, nc = combos(g);
  const long n = static_cast<long>(g.size());
  const double w = g.cell_volume() / nc;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * nc * 16 * 4);

  for (std::size_t k = 0; k < g.size(); ++k) {
    // quadratic form on gradient entries (a,b) -> row 2a+b:
    // eta |g|^2 + 2 mu (g00^2 + g11^2 + (g01+g10)^2/2) + lambda (g00+g11)^2
    double M[4][4] = {};
    for (int r = 0; r < 4; ++r) M[r][r] = eta;
    M[0][0] += 2.0 * mu[k];
    M[3][3] += 2.0 * mu[k];
    for (int r : {1, 2})
      for (int c : {1, 2}) M[r][c] += mu[k];
    for (int r : {0, 3})
      for (int c : {0, 3}) M[r][c] += lambda[k];

    for (int s = 0; s < nc; ++s) {
      auto dir = directions(s);
      // each gradient row touches component a at up to two cells
      std::array<std::array<std::pair<long, double>, 2>, 4> rows{};
      std::array<int, 4> len{};
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          Diff df = one_sided(g, k, b, dir[static_cast<std::size_t>(b)]);
          int r = 2 * a + b;
          long off = a * n;
          rows[r][0] = {off + df.self, df.c_self};
          len[r] = 1;
          if (df.nb >= 0) {
            rows[r][1] = {off + df.nb, df.c_nb};
            len[r] = 2;
          }
        }
      for (int r1 = 0; r1 < 4; ++r1)
        for (int r2 = 0; r2 < 4; ++r2) {
          if (M[r1][r2] == 0.0 || len[r1] == 0 || len[r2] == 0) continue;
          for (int p = 0; p < len[r1]; ++p)
            for (int q = 0; q < len[r2]; ++q)
              trip.emplace_back(rows[r1][p].first, rows[r2][q].first,
                                w * M[r1][r2] * rows[r1][p].second * rows[r2][q].second);
        }
    }
  }
  Eigen::SparseMatrix<double> A(d * n, d * n);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

Eigen::VectorXd pack(const VectorField& u) {
  const Grid& g = u.grid();
  long n = static_cast<long>(g.size());
  Eigen::VectorXd x(g.dim * n);
  for (int a = 0; a < g.dim; ++a)
    for (long k = 0; k < n; ++k) x[a * n + k] = u[a][static_cast<std::size_t>(k)];
  return x;
}

VectorField unpack(const Grid& g, const Eigen::VectorXd& x) {
  VectorField u(g);
  long n = static_cast<long>(g.size());
  for (int a = 0; a < g.dim; ++a)
    for (long k = 0; k < n; ++k) u[a][static_cast<std::size_t>(k)] = x[a * n + k];
  return u;
}

}  // namespace nslab
