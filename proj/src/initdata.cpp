#include "nslab/initdata.hpp"

#include <cmath>

#include "nslab/error.hpp"
#include "nslab/field_io.hpp"
#include "nslab/operators.hpp"

namespace nslab {

namespace {

int mirror(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

ScalarField mollify_axis(const ScalarField& f, int axis, double sigma) {
  const Grid& g = f.grid();
  int reach = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(static_cast<std::size_t>(2 * reach + 1));
  double sum = 0.0;
  for (int s = -reach; s <= reach; ++s) sum += w[static_cast<std::size_t>(s + reach)] = std::exp(-0.5 * s * s / (sigma * sigma));
  for (double& x : w) x /= sum;
  ScalarField out(g);
  int n = g.cells[static_cast<std::size_t>(axis)];
  for (std::size_t k = 0; k < g.size(); ++k) {
    int i = g.ix(k), j = g.iy(k);
    double acc = 0.0;
    for (int s = -reach; s <= reach; ++s) {
      int p = mirror((axis == 0 ? i : j) + s, n);
      acc += w[static_cast<std::size_t>(s + reach)] * (axis == 0 ? f.at(p, j) : f.at(i, p));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

ScalarField mollify(const ScalarField& f, double radius_cells) {
  if (radius_cells <= 0.0) return f;
  ScalarField out = mollify_axis(f, 0, radius_cells);
  if (f.grid().dim == 2) out = mollify_axis(out, 1, radius_cells);
  return out;
}

void enforce_neumann(ScalarField& f) {
  const Grid& g = f.grid();
  int nx = g.cells[0], ny = g.dim == 2 ? g.cells[1] : 1;
  for (int j = 0; j < ny; ++j) {
    f.at(0, j) = f.at(1, j);
    f.at(nx - 1, j) = f.at(nx - 2, j);
  }
  if (g.dim == 2)
    for (int i = 0; i < nx; ++i) {
      f.at(i, 0) = f.at(i, 1);
      f.at(i, ny - 1) = f.at(i, ny - 2);
    }
}

RegularizedData regularize_initial_data(const InitialData& init, double delta, double beta, double radius_cells) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  double top = std::pow(delta, -1.0 / (2.0 * beta));
  if (!(delta < top)) throw DomainError("empty density clamp range");
  const Grid& g = init.rho0.grid();
  require_same_grid(g, init.theta0.grid());
  require_same_grid(g, init.m0.grid());

  RegularizedData out;
  out.theta_lo = init.theta_lo > 0.0 ? init.theta_lo : init.theta0.min();
  out.theta_hi = init.theta_hi > 0.0 ? init.theta_hi : 1.01 * init.theta0.max();
  if (out.theta_hi < out.theta_lo) throw DomainError("theta ceiling below theta floor");

  out.rho = map(mollify(init.rho0, radius_cells), [&](double r) { return std::clamp(r, delta, top); });
  out.theta = map(mollify(init.theta0, radius_cells), [&](double t) { return std::clamp(t, out.theta_lo, out.theta_hi); });
  enforce_neumann(out.rho);
  enforce_neumann(out.theta);

  out.m = VectorField(g);
  for (int a = 0; a < g.dim; ++a)
    for (std::size_t k = 0; k < g.size(); ++k) out.m[a][k] = out.rho[k] >= init.rho0[k] ? init.m0[a][k] : 0.0;
  return out;
}

double initial_energy(const RegularizedData& d, const ConstitutiveSet& cs, double delta, double beta) {
  const Grid& g = d.rho.grid();
  ScalarField e(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    double r = d.rho[k];
    double m2 = 0.0;
    for (int a = 0; a < g.dim; ++a) m2 += d.m[a][k] * d.m[a][k];
    e[k] = (r > 0.0 ? 0.5 * m2 / r : 0.0) + rho_elastic_potential(cs, r) + delta / (beta - 1.0) * std::pow(r, beta) +
           r * d.theta[k];
  }
  return integrate(e);
}

ScalarField make_profile(const Grid& g, const ProfileSpec& p) {
  double lx = g.length[0], ly = g.length[1];
  double w = p.width;
  auto bump = [&](double x, double y, double cx, double cy) {
    double dx = (x - cx * lx) / (w * lx);
    double dy = g.dim == 2 ? (y - cy * ly) / (w * ly) : 0.0;
    return std::exp(-0.5 * (dx * dx + dy * dy));
  };
  if (p.kind == "constant") return ScalarField(g, p.base);
  if (p.kind == "gaussian")
    return ScalarField::from_function(g, [&](double x, double y) { return p.base + p.amplitude * bump(x, y, 0.5, 0.5); });
  if (p.kind == "two-bump")
    return ScalarField::from_function(g, [&](double x, double y) {
      return p.base + p.amplitude * (bump(x, y, 0.3, 0.35) + 0.5 * bump(x, y, 0.7, 0.6));
    });
  throw DomainError("unknown profile '" + p.kind + "'");
}

InitialData make_initial_data(const Grid& g, const InitialSpec& spec) {
  InitialData init;
  if (!spec.snapshot.empty()) {
    Snapshot s = read_snapshot(spec.snapshot);
    // spacing round-trips through the file, so compare cell counts and extents loosely
    bool same = s.grid.dim == g.dim;
    for (int a = 0; same && a < g.dim; ++a)
      same = s.grid.cells[a] == g.cells[a] && std::abs(s.grid.length[a] - g.length[a]) <= 1e-12 * g.length[a];
    if (!same) throw GridMismatch("initial snapshot grid differs from the configured grid");
    if (s.components.size() != static_cast<std::size_t>(g.dim + 2))
      throw DomainError("initial snapshot needs components rho, m, theta");
    init.rho0 = ScalarField(g, s.components[0].raw());
    init.m0 = VectorField(g);
    for (int a = 0; a < g.dim; ++a) init.m0[a] = ScalarField(g, s.components[static_cast<std::size_t>(1 + a)].raw());
    init.theta0 = ScalarField(g, s.components.back().raw());
  } else {
    init.rho0 = make_profile(g, spec.rho);
    init.theta0 = make_profile(g, spec.theta);
    init.m0 = VectorField(g);
    const auto& v = spec.velocity;
    const double pi = std::acos(-1.0);
    double lx = g.length[0], ly = g.length[1];
    if (v.kind == "bump") {
      // off-centre bump in u_x, zero on all walls
      init.m0[0] = ScalarField::from_function(g, [&](double x, double y) {
        double sx = std::sin(pi * x / lx);
        double yy = g.dim == 2 ? std::sin(pi * y / ly) : 1.0;
        return v.amplitude * sx * sx * std::exp(-8.0 * (x / lx - 0.4) * (x / lx - 0.4)) * yy;
      });
    } else if (v.kind == "shear") {
      // u_x varies across the domain; in 1D a full sine period
      init.m0[0] = ScalarField::from_function(g, [&](double x, double y) {
        return g.dim == 2 ? v.amplitude * std::sin(pi * x / lx) * std::sin(2.0 * pi * y / ly)
                          : v.amplitude * std::sin(2.0 * pi * x / lx) * std::sin(pi * x / lx);
      });
    } else if (v.kind != "zero") {
      throw DomainError("unknown velocity preset '" + v.kind + "'");
    }
    for (int a = 0; a < g.dim; ++a)
      for (std::size_t k = 0; k < g.size(); ++k) init.m0[a][k] *= init.rho0[k];
  }
  if (init.rho0.min() <= 0.0) throw DomainError("initial density must be positive");
  if (init.theta0.min() <= 0.0) throw DomainError("initial temperature must be positive");
  init.rho_lo = init.rho0.min();
  init.theta_lo = spec.theta_lo > 0.0 ? spec.theta_lo : init.theta0.min();
  init.theta_hi = spec.theta_hi;
  if (init.theta0.min() < init.theta_lo) throw DomainError("initial temperature below the declared floor");
  return init;
}

}  // namespace nslab
