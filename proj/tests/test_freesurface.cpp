#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ntt/bem.hpp"
#include "ntt/fsops.hpp"

using namespace ntt;

namespace {

// Flat free-surface mesh at z = 0: nx x ny cells of size s, lower-left
// corner at (x0, y0), one plane patch, normal up.
SurfaceMesh flat_fs_mesh(int nx, int ny, double s, double x0, double y0) {
  SurfaceMesh m;
  const int patch = m.add_patch(
      Region::FreeSurface, GeometryDescriptor::plane(Vec3::Zero(), Vec3::UnitZ()));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.nodes.push_back(Vec3(x0 + s * i, y0 + s * j, 0));
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      m.cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
      m.cell_region.push_back(Region::FreeSurface);
      m.cell_patch.push_back(patch);
      m.parent_cell.push_back(-1);
    }
  m.node_origin.resize(m.nodes.size());
  m.validate();
  return m;
}

} // namespace

TEST_CASE("dispersion relation in deep and finite depth") {
  // Tank wave: lambda = 40 m in 50 m of water.
  CHECK(airy_dispersion(0.15708, 50.0) == doctest::Approx(1.2414).epsilon(1e-3));
  // Shallow case.
  CHECK(airy_dispersion(0.1, 1.0) == doctest::Approx(0.3127).epsilon(1e-3));
  // Deep-water limit omega -> sqrt(g k).
  CHECK(airy_dispersion(0.3, 1e4) ==
        doctest::Approx(std::sqrt(9.81 * 0.3)).epsilon(1e-12));
  // Shallow-water limit omega -> k sqrt(g h).
  CHECK(airy_dispersion(1e-4, 2.0) ==
        doctest::Approx(1e-4 * std::sqrt(9.81 * 2.0)).epsilon(1e-6));
}

TEST_CASE("incident wave potential is harmonic and self-consistent") {
  AsymptoticFlow flow;
  flow.speed = 1.7;
  flow.amplitude = 0.5;
  flow.wavenumber = 0.2;
  flow.depth = 30.0;
  const double t = 1.3, h = 1e-3;
  const Vec3 p(2.0, 0.4, -1.0);

  // Laplacian by central differences (no y dependence).
  double lap = 0;
  for (int ax : {0, 2}) {
    Vec3 pp = p, pm = p;
    pp[ax] += h;
    pm[ax] -= h;
    lap += (flow.potential(pp, t) - 2 * flow.potential(p, t) +
            flow.potential(pm, t)) /
           (h * h);
  }
  CHECK(std::abs(lap) < 1e-5);

  // velocity = grad potential.
  const Vec3 v = flow.velocity(p, t);
  for (int ax = 0; ax < 3; ++ax) {
    Vec3 pp = p, pm = p;
    pp[ax] += h;
    pm[ax] -= h;
    const double fd = (flow.potential(pp, t) - flow.potential(pm, t)) / (2 * h);
    CHECK(v[ax] == doctest::Approx(fd).epsilon(1e-7));
  }

  // Fixed-point time derivatives.
  const double pt_fd =
      (flow.potential(p, t + h) - flow.potential(p, t - h)) / (2 * h);
  CHECK(flow.potential_t(p, t) == doctest::Approx(pt_fd).epsilon(1e-6));
  const double et_fd =
      (flow.elevation(p.x(), t + h) - flow.elevation(p.x(), t - h)) / (2 * h);
  CHECK(flow.elevation_t(p.x(), t) == doctest::Approx(et_fd).epsilon(1e-6));
}

TEST_CASE("start-up ramp and its derivative") {
  AsymptoticFlow flow;
  flow.ramp_time = 4.0;
  CHECK(flow.ramp(0.0) == 0.0);
  CHECK(flow.ramp(4.0) == 1.0);
  CHECK(flow.ramp(100.0) == 1.0);
  CHECK(flow.ramp(2.0) == doctest::Approx(0.5).epsilon(1e-12));
  const double h = 1e-5;
  for (double t : {0.5, 1.7, 3.2}) {
    const double fd = (flow.ramp(t + h) - flow.ramp(t - h)) / (2 * h);
    CHECK(flow.ramp_dot(t) == doctest::Approx(fd).epsilon(1e-6));
  }
  // Disabled ramp: flow fully on.
  AsymptoticFlow off;
  off.ramp_time = 0.0;
  CHECK(off.ramp(0.0) == 1.0);
  CHECK(off.ramp_dot(0.0) == 0.0);
}

TEST_CASE("damping zone onset profile") {
  BeachParams b;  // x_d = 50, L_d = 100
  CHECK(damping_mu(Vec3(0, 0, 0), b) == 0.0);
  CHECK(damping_mu(Vec3(30, 5, 0), b) == 0.0);
  CHECK(damping_mu(Vec3(-49, 0, 0), b) == 0.0);
  CHECK(damping_mu(Vec3(100, 0, 0), b) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(damping_mu(Vec3(-100, 3, 0), b) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(damping_mu(Vec3(150, 0, 0), b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("surface gradient of the bilinear interpolant") {
  // Flat horizontal cell, f = x: gradient (1, 0, 0); constant: zero.
  const std::array<Vec3, 4> flat = {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(2, 2, 0),
                                    Vec3(0, 2, 0)};
  const CellPoint cp = bilinear_eval(flat, 0.3, 0.7);
  const Vec3 gx = surface_gradient(cp, {0, 2, 2, 0}, 0.3, 0.7);
  CHECK((gx - Vec3(1, 0, 0)).norm() < 1e-13);
  const Vec3 gc = surface_gradient(cp, {5, 5, 5, 5}, 0.3, 0.7);
  CHECK(gc.norm() < 1e-13);

  // Tilted plane z = x/2, f = 2x + 3y: gradient is the in-plane projection
  // of (2, 3, 0) and tangential to the surface.
  const std::array<Vec3, 4> tilt = {Vec3(0, 0, 0), Vec3(1, 0, 0.5),
                                    Vec3(1, 1, 0.5), Vec3(0, 1, 0)};
  const CellPoint tp = bilinear_eval(tilt, 0.4, 0.6);
  std::array<double, 4> f{};
  for (int k = 0; k < 4; ++k) f[k] = 2 * tilt[k].x() + 3 * tilt[k].y();
  const Vec3 g = surface_gradient(tp, f, 0.4, 0.6);
  CHECK(std::abs(g.dot(tp.normal)) < 1e-12);
  const Vec3 grad3(2, 3, 0);
  const Vec3 proj = grad3 - grad3.dot(tp.normal) * tp.normal;
  CHECK((g - proj).norm() < 1e-12);
}

TEST_CASE("zero streamline shift reduces the weighted mass to the plain one") {
  const auto m = flat_fs_mesh(3, 2, 1.0, 0.0, 0.0);
  const auto d = build_dofs(m);
  const int n = d.n_dofs;
  const BemGeometry g = bem_geometry(d, reference_elevation(d));
  AsymptoticFlow flow;
  flow.speed = 2.0;
  Vec phi(n), gamma(n), zdot(n);
  for (int i = 0; i < n; ++i) {
    phi[i] = std::sin(0.9 * i);
    gamma[i] = std::cos(0.4 * i);
    zdot[i] = std::sin(1.7 * i);
  }
  FsParams p;
  p.supg_c = 0.0;
  Mat Ms = Mat::Zero(n, n);
  Vec b = Vec::Zero(n);
  assemble_dynamic_projection(d, g, p, flow, phi, gamma, zdot, 1.0, true, Ms, b);
  const Mat M = assemble_mass(d, g);
  CHECK((Ms - M).lpNorm<Eigen::Infinity>() < 1e-12);

  // With a shift and a stream the weighting is genuinely different.
  p.supg_c = 0.5;
  Mat Ms2 = Mat::Zero(n, n);
  Vec b2 = Vec::Zero(n);
  assemble_dynamic_projection(d, g, p, flow, phi, gamma, zdot, 1.0, true, Ms2, b2);
  CHECK((Ms2 - M).lpNorm<Eigen::Infinity>() > 1e-4);
}

TEST_CASE("matrix-free weak rows match the assembled operators") {
  const auto m = flat_fs_mesh(3, 3, 0.8, -1.0, -1.0);
  const auto d = build_dofs(m);
  const int n = d.n_dofs;
  const BemGeometry g = bem_geometry(d, reference_elevation(d));
  AsymptoticFlow flow;
  flow.speed = 1.2;
  flow.amplitude = 0.1;
  flow.wavenumber = 0.3;
  flow.ramp_time = 2.0;
  FsParams p;
  Vec phi(n), gamma(n), zdot(n), phidot(n);
  for (int i = 0; i < n; ++i) {
    phi[i] = 0.3 * std::sin(0.9 * i);
    gamma[i] = 0.2 * std::cos(0.4 * i);
    zdot[i] = 0.1 * std::sin(1.7 * i);
    phidot[i] = 0.4 * std::cos(0.8 * i);
  }
  const double t = 1.1;
  std::vector<int> cells(m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c) cells[c] = c;
  Vec og = Vec::Zero(n), oz = Vec::Zero(n);
  accumulate_weak_rows(d, g, p, flow, phi, gamma, zdot, phidot, t, true, cells,
                       og, oz);

  const Mat M = assemble_mass(d, g);
  const Vec bn = assemble_neumann_rhs(d, g, flow, zdot, t);
  CHECK((og - (M * gamma - bn)).lpNorm<Eigen::Infinity>() < 1e-12);

  Mat Ms = Mat::Zero(n, n);
  Vec bd = Vec::Zero(n);
  assemble_dynamic_projection(d, g, p, flow, phi, gamma, zdot, t, true, Ms, bd);
  CHECK((oz - (Ms * phidot - bd)).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("flat surface at rest is an equilibrium of the weak conditions") {
  const auto m = flat_fs_mesh(2, 2, 1.5, -1.5, -1.5);
  const auto d = build_dofs(m);
  const int n = d.n_dofs;
  const BemGeometry g = bem_geometry(d, reference_elevation(d));
  AsymptoticFlow flow;  // no stream, no wave
  FsParams p;
  const Vec zero = Vec::Zero(n);
  std::vector<int> cells(m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c) cells[c] = c;
  Vec og = Vec::Zero(n), oz = Vec::Zero(n);
  accumulate_weak_rows(d, g, p, flow, zero, zero, zero, zero, 0.0, true, cells,
                       og, oz);
  CHECK(og.lpNorm<Eigen::Infinity>() < 1e-14);
  CHECK(oz.lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("damping zone adds the absorbing pressure to the dynamic rows") {
  // Small cell far inside the zone; mu is nearly constant across it.
  const double s = 0.2;
  const auto m = flat_fs_mesh(1, 1, s, 100.0, 0.0);
  const auto d = build_dofs(m);
  const int n = d.n_dofs;
  const BemGeometry g = bem_geometry(d, reference_elevation(d));
  AsymptoticFlow flow;
  FsParams p;
  p.beach.gain = 800.0;
  const double zd = 0.3;
  const Vec zero = Vec::Zero(n);
  const Vec zdot = Vec::Constant(n, zd);
  std::vector<int> cells = {0};
  Vec og = Vec::Zero(n), on_ = Vec::Zero(n), off = Vec::Zero(n);
  accumulate_weak_rows(d, g, p, flow, zero, zero, zdot, zero, 0.0, true, cells,
                       og, on_);
  og.setZero();
  accumulate_weak_rows(d, g, p, flow, zero, zero, zdot, zero, 0.0, false, cells,
                       og, off);
  // Row increment ~ gain * mu * zdot / rho * area / 4 per corner dof.
  const double mu = damping_mu(Vec3(100.0 + s / 2, 0, 0), p.beach);
  const double expect = p.beach.gain * mu * zd / p.rho * s * s / 4;
  for (int i = 0; i < n; ++i)
    CHECK(on_[i] - off[i] == doctest::Approx(expect).epsilon(0.01));
}
