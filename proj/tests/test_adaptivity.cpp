#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ntt/adapt.hpp"
#include "ntt/mesh_builders.hpp"

using namespace ntt;

namespace {

// Flat free-surface strip at z = 0 with nx x ny unit cells.
SurfaceMesh flat_fs_mesh(int nx, int ny) {
  SurfaceMesh m;
  const int patch = m.add_patch(
      Region::FreeSurface, GeometryDescriptor::plane(Vec3::Zero(), Vec3::UnitZ()));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) m.nodes.push_back(Vec3(i, j, 0));
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

TEST_CASE("smooth elevation fields produce a vanishing indicator") {
  const auto m = flat_fs_mesh(4, 3);
  const auto d = build_dofs(m);
  Vec z = Vec::Zero(d.n_dofs);
  auto eta = kelly_indicator(d, z);
  for (double v : eta) CHECK(v == 0.0);

  // A plane has continuous gradients: jumps cancel.
  for (int i = 0; i < d.n_dofs; ++i) {
    const Vec3& p = m.nodes[d.dof_node[i]];
    z[i] = 0.4 * p.x() - 0.7 * p.y() + 0.2;
  }
  eta = kelly_indicator(d, z);
  for (double v : eta) CHECK(std::abs(v) < 1e-20);
}

TEST_CASE("a gradient kink concentrates the indicator on its two cells") {
  const auto m = flat_fs_mesh(4, 1);
  const auto d = build_dofs(m);
  Vec z(d.n_dofs);
  for (int i = 0; i < d.n_dofs; ++i)
    z[i] = std::abs(m.nodes[d.dof_node[i]].x() - 2.0);
  const auto eta = kelly_indicator(d, z);
  // The elevation deforms the surface into a tent with slope 1. On the
  // tilted faces the co-normal derivative is 1/sqrt(2) each side, so the
  // squared jump is 2 over a unit edge, scaled by diagonal/24 = sqrt(3)/24.
  const double expect = std::sqrt(3.0) / 24.0 * 2.0;
  CHECK(eta[1] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(eta[2] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(std::abs(eta[0]) < 1e-20);
  CHECK(std::abs(eta[3]) < 1e-20);
}

TEST_CASE("marking picks the top fraction with deterministic ties") {
  const auto m = build_cube_mesh(1.0, 2);  // 4 free-surface cells on top
  int n_fs = 0;
  for (auto r : m.cell_region)
    if (r == Region::FreeSurface) ++n_fs;
  REQUIRE(n_fs == 4);

  // All equal: ties resolve toward lower cell ids.
  std::vector<double> ind(m.n_cells(), 1.0);
  auto flags = mark_top_fraction(m, ind, 0.5);
  int flagged = 0;
  std::vector<int> ids;
  for (int c = 0; c < m.n_cells(); ++c)
    if (flags[c]) {
      ++flagged;
      ids.push_back(c);
      CHECK(m.cell_region[c] == Region::FreeSurface);
    }
  CHECK(flagged == 2);  // ceil(0.5 * 4)
  // The two lowest free-surface cell ids.
  std::vector<int> fs;
  for (int c = 0; c < m.n_cells(); ++c)
    if (m.cell_region[c] == Region::FreeSurface) fs.push_back(c);
  CHECK(ids == std::vector<int>(fs.begin(), fs.begin() + 2));

  // Small fraction still refines at least one cell.
  flags = mark_top_fraction(m, ind, 0.04);
  flagged = 0;
  for (int c = 0; c < m.n_cells(); ++c) flagged += flags[c] ? 1 : 0;
  CHECK(flagged == 1);

  // Zero fraction refines nothing.
  flags = mark_top_fraction(m, ind, 0.0);
  for (int c = 0; c < m.n_cells(); ++c) CHECK_FALSE(flags[c]);

  // The largest indicator wins over ids.
  ind.assign(m.n_cells(), 0.0);
  ind[fs[3]] = 5.0;
  flags = mark_top_fraction(m, ind, 0.04);
  CHECK(flags[fs[3]]);
}

TEST_CASE("state transfer is exact for linear fields") {
  const auto m = flat_fs_mesh(3, 2);
  const auto d = build_dofs(m);
  const int n = d.n_dofs;
  Vec y(3 * n);
  const auto f0 = [](const Vec3& p) { return 2 * p.x() + 3 * p.y() - 1; };
  const auto f1 = [](const Vec3& p) { return -p.x() + 0.5 * p.y() + 4; };
  const auto f2 = [](const Vec3& p) { return 0.3 * p.x() - 0.2 * p.y(); };
  for (int i = 0; i < n; ++i) {
    const Vec3& p = m.nodes[d.dof_node[i]];
    y[i] = f0(p);
    y[n + i] = f1(p);
    y[2 * n + i] = f2(p);
  }

  // Refine a single cell; closure keeps the mesh 1-irregular and leaves
  // hanging midpoints whose values interpolate their edge parents.
  std::vector<bool> flags(m.n_cells(), false);
  flags[2] = true;
  const auto r = refine_cells(m, flags);
  const auto dr = build_dofs(r);
  const int nr = dr.n_dofs;
  REQUIRE(nr > n);
  const Vec yr = transfer_state(d, dr, y);
  for (int i = 0; i < nr; ++i) {
    const Vec3& p = r.nodes[dr.dof_node[i]];
    CHECK(yr[i] == doctest::Approx(f0(p)).epsilon(1e-12));
    CHECK(yr[nr + i] == doctest::Approx(f1(p)).epsilon(1e-12));
    CHECK(yr[2 * nr + i] == doctest::Approx(f2(p)).epsilon(1e-12));
  }
}

TEST_CASE("state transfer averages parents at new midpoints") {
  const auto m = flat_fs_mesh(2, 1);
  const auto d = build_dofs(m);
  const int n = d.n_dofs;
  Vec y = Vec::Zero(3 * n);
  for (int i = 0; i < n; ++i) y[i] = 10.0 + i;  // arbitrary nodal data

  const auto r = refine_cells(m, std::vector<bool>(m.n_cells(), true));
  const auto dr = build_dofs(r);
  const Vec yr = transfer_state(d, dr, y);
  int checked = 0;
  for (int i = 0; i < dr.n_dofs; ++i) {
    const NodeOrigin& o = r.node_origin[dr.dof_node[i]];
    if (o.kind != NodeOrigin::Kind::EdgeMidpoint) continue;
    const int pa = d.dof(o.a, dr.dof_patch[i]);
    const int pb = d.dof(o.b, dr.dof_patch[i]);
    CHECK(yr[i] == doctest::Approx(0.5 * (y[pa] + y[pb])).epsilon(1e-14));
    ++checked;
  }
  CHECK(checked > 0);
}
