#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ntt/forces.hpp"
#include "ntt/mesh_builders.hpp"
#include "ntt/runner.hpp"
#include "ntt/vtk.hpp"

using namespace ntt;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Spheroid hull refined a few times. The dof layout references the mesh, so
// callers keep the returned mesh alive.
SurfaceMesh make_hull(const Vec3& semi, int levels) {
  SurfaceMesh m = build_spheroid_mesh(Vec3(0, 0, -4.0), semi);
  for (int l = 0; l < levels; ++l)
    m = refine_cells(m, std::vector<bool>(m.n_cells(), true));
  return m;
}

} // namespace

TEST_CASE("reference buoyant load of the spheroid") {
  CHECK(buoyancy_scale(5, 1, 1, 1000, 9.81) ==
        doctest::Approx(205460.157).epsilon(1e-6));
}

TEST_CASE("Bernoulli constant of the incident flow") {
  AsymptoticFlow rest;
  CHECK(bernoulli_constant(rest, 9.81, 0.0) == 0.0);

  AsymptoticFlow stream;
  stream.speed = 3.0;
  CHECK(bernoulli_constant(stream, 9.81, 1.0) ==
        doctest::Approx(4.5).epsilon(1e-12));

  AsymptoticFlow wave;
  wave.amplitude = 0.2;
  wave.wavenumber = 0.3;
  const double t = 0.7;
  const Vec3 o = Vec3::Zero();
  const double expect = wave.potential_t(o, t) +
                        0.5 * wave.velocity(o, t).squaredNorm() +
                        9.81 * wave.elevation(0.0, t);
  CHECK(bernoulli_constant(wave, 9.81, t) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("hydrostatic pressure integrates to the buoyant force") {
  const Vec3 semi(5, 1, 1);
  const auto m = make_hull(semi, 4);
  const auto d = build_dofs(m);
  const BemGeometry g = bem_geometry(d, reference_elevation(d));
  AsymptoticFlow rest;
  FsParams p;
  const Vec zero = Vec::Zero(d.n_dofs);
  const Vec3 F = hull_force(d, g, p, rest, zero, zero, zero, 0.0);
  const double L0 = buoyancy_scale(semi.x(), semi.y(), semi.z(), p.rho, p.gravity);
  CHECK(F.z() == doctest::Approx(L0).epsilon(0.02));
  CHECK(std::abs(F.x()) < 1e-8 * L0);
  CHECK(std::abs(F.y()) < 1e-8 * L0);
}

TEST_CASE("an undisturbed uniform stream adds no force") {
  // With zero disturbance the dynamic head cancels against the Bernoulli
  // constant, leaving hydrostatics only.
  const Vec3 semi(5, 1, 1);
  const auto m = make_hull(semi, 2);
  const auto d = build_dofs(m);
  const BemGeometry g = bem_geometry(d, reference_elevation(d));
  AsymptoticFlow rest, stream;
  stream.speed = 2.5;
  FsParams p;
  const Vec zero = Vec::Zero(d.n_dofs);
  const Vec3 F0 = hull_force(d, g, p, rest, zero, zero, zero, 0.0);
  const Vec3 F1 = hull_force(d, g, p, stream, zero, zero, zero, 0.0);
  CHECK((F1 - F0).norm() < 1e-8 * F0.norm());
}

TEST_CASE("force history CSV format and determinism") {
  const std::vector<ForceSample> rows = {{0.0, 1.5, -2.25, 0.1, -0.2},
                                         {0.5, 1.0 / 3.0, 2e-7, 0.25, 1e10}};
  write_history_csv("hist_a.csv", rows);
  write_history_csv("hist_b.csv", rows);
  const std::string a = slurp("hist_a.csv");
  CHECK(a == slurp("hist_b.csv"));
  CHECK(a ==
        "t,R,L,Rstar,Lstar\n"
        "0,1.5,-2.25,0.1,-0.2\n"
        "0.5,0.333333333,2e-07,0.25,1e+10\n");
  std::remove("hist_a.csv");
  std::remove("hist_b.csv");
}

TEST_CASE("refinement cycle CSV format") {
  const std::vector<CycleRow> rows = {{0, 100, 140, 5, 3, 123.456, -7.0, 1.0},
                                      {1, 150, 210, 4, 2, 120.0, -6.5, 2.0}};
  write_cycles_csv("cyc.csv", rows);
  CHECK(slurp("cyc.csv") ==
        "cycle,nodes,dofs,newton_iterations,jacobians,drag_N,lift_N\n"
        "0,100,140,5,3,123.456,-7\n"
        "1,150,210,4,2,120,-6.5\n");
  std::remove("cyc.csv");
}

TEST_CASE("VTK snapshot is byte-stable and matches the golden layout") {
  SurfaceMesh m;
  const int patch = m.add_patch(
      Region::FreeSurface, GeometryDescriptor::plane(Vec3::Zero(), Vec3::UnitZ()));
  m.nodes = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
  m.cells = {{0, 1, 2, 3}};
  m.cell_region = {Region::FreeSurface};
  m.cell_patch = {patch};
  m.parent_cell = {-1};
  m.node_origin.resize(4);
  const auto d = build_dofs(m);

  Vec phi(4), eta(4);
  for (int i = 0; i < 4; ++i) phi[d.dof(i, patch)] = i + 1.0;
  eta.setConstant(0.5);
  write_vtk("snap_a.vtk", d, {{"phi", phi}}, &eta);
  write_vtk("snap_b.vtk", d, {{"phi", phi}}, &eta);
  const std::string a = slurp("snap_a.vtk");
  CHECK(a == slurp("snap_b.vtk"));
  CHECK(a ==
        "# vtk DataFile Version 3.0\n"
        "towing tank boundary\n"
        "ASCII\n"
        "DATASET UNSTRUCTURED_GRID\n"
        "POINTS 4 double\n"
        "0 0 0.5\n"
        "1 0 0.5\n"
        "1 1 0.5\n"
        "0 1 0.5\n"
        "CELLS 1 5\n"
        "4 0 1 2 3\n"
        "CELL_TYPES 1\n"
        "9\n"
        "CELL_DATA 1\n"
        "SCALARS region int 1\n"
        "LOOKUP_TABLE default\n"
        "0\n"
        "POINT_DATA 4\n"
        "SCALARS phi double 1\n"
        "LOOKUP_TABLE default\n"
        "1\n"
        "2\n"
        "3\n"
        "4\n");
  std::remove("snap_a.vtk");
  std::remove("snap_b.vtk");
}

TEST_CASE("VTK node reduction interpolates hanging nodes") {
  // Refine one cell of a 2x1 strip; the neighbour keeps a hanging midpoint.
  SurfaceMesh m;
  const int patch = m.add_patch(
      Region::FreeSurface, GeometryDescriptor::plane(Vec3::Zero(), Vec3::UnitZ()));
  m.nodes = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0),
             Vec3(0, 1, 0), Vec3(1, 1, 0), Vec3(2, 1, 0)};
  m.cells = {{0, 1, 4, 3}, {1, 2, 5, 4}};
  m.cell_region = {Region::FreeSurface, Region::FreeSurface};
  m.cell_patch = {patch, patch};
  m.parent_cell = {-1, -1};
  m.node_origin.resize(6);
  m.validate();
  std::vector<bool> flags = {true, false};
  const auto r = refine_cells(m, flags);
  const auto d = build_dofs(r);

  Vec f(d.n_dofs);
  for (int i = 0; i < d.n_dofs; ++i) {
    const Vec3& p = r.nodes[d.dof_node[i]];
    f[i] = 3 * p.x() - 2 * p.y() + 1;
  }
  write_vtk("hang.vtk", d, {{"field", f}});
  std::istringstream in(slurp("hang.vtk"));
  std::remove("hang.vtk");
  std::string line;
  while (std::getline(in, line) && line != "LOOKUP_TABLE default") {}
  while (std::getline(in, line) && line != "LOOKUP_TABLE default") {}
  for (int node = 0; node < r.n_nodes(); ++node) {
    REQUIRE(std::getline(in, line));
    const Vec3& p = r.nodes[node];
    CHECK(std::stod(line) ==
          doctest::Approx(3 * p.x() - 2 * p.y() + 1).epsilon(1e-9));
  }
}
