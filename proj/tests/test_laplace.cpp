#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ntt/bem.hpp"
#include "ntt/mesh_builders.hpp"
#include "ntt/quadrature.hpp"

using namespace ntt;

namespace {

// Influence matrices of a full mesh.
void full_influence(const DofLayout& d, Mat& N, Mat& D) {
  const int n = d.n_dofs;
  const BemGeometry g = bem_geometry(d, reference_elevation(d));
  std::vector<int> rows(n), cells(d.mesh->n_cells());
  for (int i = 0; i < n; ++i) rows[i] = i;
  for (int c = 0; c < d.mesh->n_cells(); ++c) cells[c] = c;
  N = Mat::Zero(n, n);
  D = Mat::Zero(n, n);
  assemble_influence(d, g, rows, cells, 1.0, N, D);
}

// Weighted L2 norm of a per-dof error against the mesh mass matrix.
double l2_error(const DofLayout& d, const Vec& err) {
  const BemGeometry g = bem_geometry(d, reference_elevation(d));
  const Mat M = assemble_mass(d, g);
  return std::sqrt(err.dot(M * err));
}

} // namespace

TEST_CASE("regular quadrature weights sum to the reference area") {
  double s4 = 0, s8 = 0;
  for (const auto& q : quad_rule_regular()) s4 += q.w;
  for (const auto& q : quad_rule_fine()) s8 += q.w;
  CHECK(s4 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s8 == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("singular rule integrates 1/r on the reference square") {
  // Exact value of int over [0,1]^2 of 1/|x - corner| dx:
  // 2 ln(1 + sqrt 2) = 1.76274717...
  const double exact = 2.0 * std::log(1.0 + std::sqrt(2.0));
  for (auto [u0, v0] : {std::pair{0.0, 0.0}, {1.0, 1.0}}) {
    double acc = 0;
    for (const auto& q : quad_rule_singular(u0, v0)) {
      const double r = std::hypot(q.u - u0, q.v - v0);
      acc += q.w / r;
    }
    CHECK(acc == doctest::Approx(exact).epsilon(1e-5));
  }
  // Interior singularity: weights still sum to the cell area.
  double area = 0;
  for (const auto& q : quad_rule_singular(0.25, 0.5)) area += q.w;
  CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kernel values through a far-away panel") {
  // Small panel at distance R along z, collocation at the origin. The row
  // sums of D and N approximate area * G and area * dG/dn with
  // G = 1/(4 pi R), dG/dn = -(y-x).n / (4 pi r^3).
  for (double R : {1.0, 0.5}) {
    const double h = 1e-3;
    SurfaceMesh m;
    m.nodes = {Vec3(-h / 2, -h / 2, R), Vec3(h / 2, -h / 2, R),
               Vec3(h / 2, h / 2, R), Vec3(-h / 2, h / 2, R)};
    const int patch = m.add_patch(
        Region::FreeSurface,
        GeometryDescriptor::plane(Vec3(0, 0, R), Vec3(0, 0, 1)));
    m.cells = {{0, 1, 2, 3}};
    m.cell_region = {Region::FreeSurface};
    m.cell_patch = {patch};
    m.parent_cell = {-1};
    m.node_origin.resize(4);
    const auto d = build_dofs(m);
    BemGeometry g = bem_geometry(d, reference_elevation(d));
    // Extra collocation row at the origin.
    g.colloc.push_back(Vec3::Zero());
    g.bie_point.push_back(Vec3::Zero());
    g.bie_cell.push_back(-1);
    g.bie_u.push_back(0);
    g.bie_v.push_back(0);
    g.bie_weights.push_back({{4, 1.0}});

    Mat N = Mat::Zero(5, 5), D = Mat::Zero(5, 5);
    assemble_influence(d, g, {4}, {0}, 1.0, N, D);
    const double area = h * h;
    const double G = 1.0 / (4.0 * M_PI * R);
    // n = +z, y - x = (0,0,R): dG/dn = -1/(4 pi R^2).
    const double dG = -1.0 / (4.0 * M_PI * R * R);
    CHECK(D.row(4).sum() == doctest::Approx(area * G).epsilon(1e-6));
    CHECK(N.row(4).sum() == doctest::Approx(area * dG).epsilon(1e-6));
  }
}

TEST_CASE("solid angle fractions from the rigid-mode row sums") {
  // Row sum of N equals minus the interior solid-angle fraction.
  const auto m = build_cube_mesh(1.0, 4);
  const auto d = build_dofs(m);
  Mat N, D;
  full_influence(d, N, D);
  int checked_face = 0, checked_corner = 0;
  for (int i = 0; i < d.n_dofs; ++i) {
    const double alpha = -N.row(i).sum();
    CHECK(alpha > 0.0);
    CHECK(alpha < 1.0);
    // Prescribed-potential rows collocate at shifted (smooth) points where
    // the fraction is always near 1/2.
    if (d.dirichlet[i]) {
      CHECK(alpha == doctest::Approx(0.5).epsilon(2e-3));
      continue;
    }
    const Vec3& p = m.nodes[d.dof_node[i]];
    int on_boundary = 0;
    for (int ax = 0; ax < 3; ++ax)
      if (p[ax] < 1e-12 || p[ax] > 1 - 1e-12) ++on_boundary;
    if (on_boundary == 1) {
      CHECK(alpha == doctest::Approx(0.5).epsilon(2e-3));
      ++checked_face;
    } else if (on_boundary == 3) {
      CHECK(alpha == doctest::Approx(0.125).epsilon(2e-2));
      ++checked_corner;
    }
  }
  CHECK(checked_face > 0);
  CHECK(checked_corner > 0);
}

TEST_CASE("constant potential annihilates the integral-equation residual") {
  const auto m = build_cube_mesh(1.0, 3);
  const auto d = build_dofs(m);
  Mat N, D;
  full_influence(d, N, D);
  const Vec phi = Vec::Ones(d.n_dofs), gamma = Vec::Zero(d.n_dofs);
  const BemGeometry g = bem_geometry(d, reference_elevation(d));
  const Vec r = bie_residual(N, D, g, phi, gamma);
  CHECK(r.lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("matrix-free rows match the assembled residual") {
  const auto m = build_cube_mesh(1.0, 2);
  const auto d = build_dofs(m);
  const int n = d.n_dofs;
  Mat N, D;
  full_influence(d, N, D);
  Vec phi(n), gamma(n);
  for (int i = 0; i < n; ++i) {
    phi[i] = std::sin(0.7 * i);
    gamma[i] = std::cos(1.3 * i);
  }
  const BemGeometry g = bem_geometry(d, reference_elevation(d));
  const Vec ref = bie_residual(N, D, g, phi, gamma);
  std::vector<int> rows(n), cells(m.n_cells());
  for (int i = 0; i < n; ++i) rows[i] = i;
  for (int c = 0; c < m.n_cells(); ++c) cells[c] = c;
  Vec out = Vec::Zero(n);
  accumulate_bie(d, g, rows, cells, phi, gamma, out);
  CHECK((out - ref).lpNorm<Eigen::Infinity>() < 1e-12);
  // The derivative of the residual in phi is N - diag(N 1).
  const Mat A = bie_phi_matrix(N, g);
  const Vec r2 = A * phi - D * gamma;
  CHECK((r2 - ref).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("constant Dirichlet data gives zero flux") {
  const auto m = build_cube_mesh(1.0, 3);
  const auto d = build_dofs(m);
  const auto sol = solve_laplace(
      d, [](const Vec3&) { return 1.0; },
      [](const Vec3&, const Vec3&) { return 0.0; });
  CHECK(sol.rank_deficiency == 0);
  for (int i = 0; i < d.n_dofs; ++i) {
    CHECK(sol.phi[i] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(sol.gamma[i]) < 1e-6);
  }
}

TEST_CASE("mixed problem recovers a linear harmonic field") {
  // phi = x with Dirichlet data on the x=0 face and fluxes n_x elsewhere.
  const auto m = build_cube_mesh(1.0, 4);
  const auto d = build_dofs(m);
  const auto sol = solve_laplace(
      d, [](const Vec3& p) { return p.x(); },
      [](const Vec3&, const Vec3& n) { return n.x(); });
  CHECK(sol.rank_deficiency == 0);
  const BemGeometry g = bem_geometry(d, reference_elevation(d));
  Vec err(d.n_dofs);
  for (int i = 0; i < d.n_dofs; ++i) err[i] = sol.phi[i] - g.colloc[i].x();
  CHECK(l2_error(d, err) < 5e-3);
}

TEST_CASE("flux recovery for linear harmonic sits at the quadrature floor") {
  const auto m = build_cube_mesh(1.0, 4);
  const auto d = build_dofs(m);
  const auto sol = solve_laplace(
      d, [](const Vec3& p) { return p.x(); },
      [](const Vec3&, const Vec3& nrm) { return nrm.x(); });
  for (int i = 0; i < d.n_dofs; ++i) {
    const int c = d.dof_cells[i].front();
    const Vec3 nrm = cell_geometry(*d.mesh, c, 0.5, 0.5).normal;
    CHECK(std::abs(sol.gamma[i] - nrm.x()) < 1e-5);
  }
}

TEST_CASE("flux recovery for phi = x^2 - z^2 converges at order >= 1.5") {
  // The quadratic is not representable by the bilinear elements, so the
  // interpolation error drives a genuine convergence study.
  std::vector<double> errs, hs;
  for (int n : {2, 4, 8}) {
    const auto m = build_cube_mesh(1.0, n);
    const auto d = build_dofs(m);
    const auto sol = solve_laplace(
        d, [](const Vec3& p) { return p.x() * p.x() - p.z() * p.z(); },
        [](const Vec3& p, const Vec3& nrm) {
          return Vec3(2 * p.x(), 0, -2 * p.z()).dot(nrm);
        });
    const BemGeometry g = bem_geometry(d, reference_elevation(d));
    Vec err(d.n_dofs);
    for (int i = 0; i < d.n_dofs; ++i) {
      const int c = d.dof_cells[i].front();
      const Vec3 nrm = cell_geometry(*d.mesh, c, 0.5, 0.5).normal;
      const Vec3& p = g.colloc[i];
      err[i] = sol.gamma[i] - Vec3(2 * p.x(), 0, -2 * p.z()).dot(nrm);
    }
    errs.push_back(l2_error(d, err));
    hs.push_back(1.0 / n);
  }
  CHECK(errs[1] < errs[0]);
  CHECK(errs[2] < errs[1]);
  const double order = std::log(errs[0] / errs[2]) / std::log(hs[0] / hs[2]);
  CHECK(order >= 1.5);
}

TEST_CASE("all-Neumann problem is singular by one constant mode") {
  const auto m = build_spheroid_mesh(Vec3(0, 0, -2.5), Vec3(5, 1, 1));
  const auto r = refine_cells(m, std::vector<bool>(m.n_cells(), true));
  const auto d = build_dofs(r);
  const auto sol = solve_laplace(
      d, [](const Vec3&) { return 0.0; },
      [](const Vec3&, const Vec3&) { return 0.0; });
  CHECK(sol.rank_deficiency >= 1);
}

TEST_CASE("double-node continuity ties potentials across patch borders") {
  const auto m = build_cube_mesh(1.0, 3);
  const auto d = build_dofs(m);
  const auto sol = solve_laplace(
      d, [](const Vec3& p) { return p.x(); },
      [](const Vec3&, const Vec3& n) { return n.x(); });
  for (const auto& group : d.node_group) {
    if (group.size() < 2) continue;
    for (size_t k = 1; k < group.size(); ++k)
      CHECK(sol.phi[group[k]] ==
            doctest::Approx(sol.phi[group[0]]).epsilon(1e-10));
  }
}
