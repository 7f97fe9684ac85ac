#include "ntt/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ntt {

const char* region_name(Region r) {
  switch (r) {
    case Region::FreeSurface: return "FreeSurface";
    case Region::Hull: return "Hull";
    case Region::Bottom: return "Bottom";
    case Region::Inflow: return "Inflow";
    case Region::FarField: return "FarField";
  }
  return "?";
}

int SurfaceMesh::add_patch(Region r, const GeometryDescriptor& g) {
  patch_region.push_back(r);
  patch_geometry.push_back(g);
  return static_cast<int>(patch_region.size()) - 1;
}

std::pair<int, int> SurfaceMesh::edge_key(int a, int b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

int SurfaceMesh::find_midpoint(int a, int b) const {
  auto it = edge_midpoint.find(edge_key(a, b));
  return it == edge_midpoint.end() ? -1 : it->second;
}

bool SurfaceMesh::edge_in_use(int a, int b, int patch) const {
  const auto key = edge_key(a, b);
  for (int c = 0; c < n_cells(); ++c) {
    if (cell_patch[c] != patch) continue;
    const auto& q = cells[c];
    for (int e = 0; e < 4; ++e)
      if (edge_key(q[e], q[(e + 1) % 4]) == key) return true;
  }
  return false;
}

std::array<double, 4> quad_shape(double u, double v) {
  return {(1 - u) * (1 - v), u * (1 - v), u * v, (1 - u) * v};
}
std::array<double, 4> quad_shape_du(double u, double v) {
  (void)u;
  return {-(1 - v), (1 - v), v, -v};
}
std::array<double, 4> quad_shape_dv(double u, double v) {
  (void)v;
  return {-(1 - u), -u, u, 1 - u};
}

CellPoint bilinear_eval(const std::array<Vec3, 4>& c, double u, double v) {
  const auto n = quad_shape(u, v);
  const auto du = quad_shape_du(u, v);
  const auto dv = quad_shape_dv(u, v);
  CellPoint p;
  p.point = n[0] * c[0] + n[1] * c[1] + n[2] * c[2] + n[3] * c[3];
  p.t_u = du[0] * c[0] + du[1] * c[1] + du[2] * c[2] + du[3] * c[3];
  p.t_v = dv[0] * c[0] + dv[1] * c[1] + dv[2] * c[2] + dv[3] * c[3];
  const Vec3 cr = p.t_u.cross(p.t_v);
  p.jacobian = cr.norm();
  p.normal = p.jacobian > 0 ? Vec3(cr / p.jacobian) : Vec3::UnitZ();
  return p;
}

std::array<Vec3, 4> cell_corners(const SurfaceMesh& mesh, int cell) {
  const auto& q = mesh.cells[cell];
  return {mesh.nodes[q[0]], mesh.nodes[q[1]], mesh.nodes[q[2]], mesh.nodes[q[3]]};
}

CellPoint cell_geometry(const SurfaceMesh& mesh, int cell, double u, double v) {
  return bilinear_eval(cell_corners(mesh, cell), u, v);
}

double cell_diagonal(const SurfaceMesh& mesh, int cell) {
  const auto c = cell_corners(mesh, cell);
  return std::max((c[2] - c[0]).norm(), (c[3] - c[1]).norm());
}

double cell_area(const SurfaceMesh& mesh, int cell) {
  // 3x3 Gauss-like midpoint grid is plenty for bookkeeping purposes.
  static const double x[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
  static const double w[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  const auto c = cell_corners(mesh, cell);
  double a = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      a += w[i] * w[j] * bilinear_eval(c, x[i], x[j]).jacobian;
  return a;
}

double cell_normal_spread(const SurfaceMesh& mesh, int cell) {
  const int patch = mesh.cell_patch[cell];
  const auto& geo = mesh.patch_geometry[patch];
  const auto c = cell_corners(mesh, cell);
  double worst = 1.0;
  std::vector<Vec3> normals;
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j) {
      const Vec3 p = bilinear_eval(c, i / 2.0, j / 2.0).point;
      normals.push_back(geo.kind == GeometryDescriptor::Kind::None
                            ? bilinear_eval(c, i / 2.0, j / 2.0).normal
                            : geo.surface_normal(geo.project(p)));
    }
  for (size_t i = 0; i < normals.size(); ++i)
    for (size_t j = i + 1; j < normals.size(); ++j)
      worst = std::min(worst, normals[i].dot(normals[j]));
  return std::acos(std::clamp(worst, -1.0, 1.0));
}

double cell_aspect_ratio(const SurfaceMesh& mesh, int cell) {
  const CellPoint p = cell_geometry(mesh, cell, 0.5, 0.5);
  const double lu = p.t_u.norm(), lv = p.t_v.norm();
  return std::max(lu, lv) / std::max(std::min(lu, lv), 1e-300);
}

void SurfaceMesh::validate() const {
  if (cells.size() != cell_region.size() || cells.size() != cell_patch.size())
    throw MeshError("mesh arrays are inconsistent");
  for (int c = 0; c < n_cells(); ++c) {
    for (int e = 0; e < 4; ++e)
      if (cells[c][e] < 0 || cells[c][e] >= n_nodes())
        throw MeshError("cell " + std::to_string(c) + " references invalid node");
    for (double u : {0.0, 0.5, 1.0})
      for (double v : {0.0, 0.5, 1.0})
        if (cell_geometry(*this, c, u, v).jacobian <= 0)
          throw MeshError("cell " + std::to_string(c) + " has non-positive Jacobian");
  }
}

namespace {

struct EdgeIndex {
  std::map<std::pair<int, int>, std::vector<int>> cells_on_edge;
  explicit EdgeIndex(const SurfaceMesh& m) {
    for (int c = 0; c < m.n_cells(); ++c)
      for (int e = 0; e < 4; ++e)
        cells_on_edge[SurfaceMesh::edge_key(m.cells[c][e], m.cells[c][(e + 1) % 4])]
            .push_back(c);
  }
  const std::vector<int>* find(int a, int b) const {
    auto it = cells_on_edge.find(SurfaceMesh::edge_key(a, b));
    return it == cells_on_edge.end() ? nullptr : &it->second;
  }
};

SurfaceMesh copy_shell(const SurfaceMesh& mesh) {
  SurfaceMesh out;
  out.nodes = mesh.nodes;
  out.patch_region = mesh.patch_region;
  out.patch_geometry = mesh.patch_geometry;
  out.edge_midpoint = mesh.edge_midpoint;
  out.midpoint_parents = mesh.midpoint_parents;
  out.node_origin.resize(mesh.nodes.size());
  for (int i = 0; i < mesh.n_nodes(); ++i)
    out.node_origin[i] = {NodeOrigin::Kind::Copied, i, -1, -1};
  return out;
}

int get_or_create_midpoint(SurfaceMesh& out, int a, int b, const GeometryDescriptor& geo) {
  const auto key = SurfaceMesh::edge_key(a, b);
  auto it = out.edge_midpoint.find(key);
  if (it != out.edge_midpoint.end()) return it->second;
  const Vec3 p = geo.project(0.5 * (out.nodes[a] + out.nodes[b]));
  const int id = out.n_nodes();
  out.nodes.push_back(p);
  out.node_origin.push_back({NodeOrigin::Kind::EdgeMidpoint, a, b, -1});
  out.midpoint_parents.resize(out.nodes.size(), {-1, -1});
  out.midpoint_parents[id] = key;
  out.edge_midpoint[key] = id;
  return id;
}

void push_cell(SurfaceMesh& out, const std::array<int, 4>& q, Region r, int patch,
               int parent) {
  out.cells.push_back(q);
  out.cell_region.push_back(r);
  out.cell_patch.push_back(patch);
  out.parent_cell.push_back(parent);
}

void check_children(const SurfaceMesh& out, int first_new, int old_cell) {
  for (int c = first_new; c < out.n_cells(); ++c)
    for (double u : {0.0, 0.5, 1.0})
      for (double v : {0.0, 0.5, 1.0})
        if (cell_geometry(out, c, u, v).jacobian <= 0)
          throw MeshError("refinement of cell " + std::to_string(old_cell) +
                          " produced an inverted child");
}

} // namespace

SurfaceMesh refine_cells(const SurfaceMesh& mesh, const std::vector<bool>& flags_in) {
  if (static_cast<int>(flags_in.size()) != mesh.n_cells())
    throw MeshError("refinement flag vector does not match cell count");
  std::vector<bool> flags = flags_in;

  // Closure: a flagged cell whose corner hangs on a coarser same-patch
  // neighbour drags that neighbour into the refinement set.
  const EdgeIndex edges(mesh);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int c = 0; c < mesh.n_cells(); ++c) {
      if (!flags[c]) continue;
      for (int e = 0; e < 4; ++e) {
        const int n = mesh.cells[c][e];
        if (n >= static_cast<int>(mesh.midpoint_parents.size())) continue;
        const auto par = mesh.midpoint_parents[n];
        if (par.first < 0) continue;
        if (const auto* on = edges.find(par.first, par.second)) {
          for (int nb : *on) {
            if (mesh.cell_patch[nb] == mesh.cell_patch[c] && !flags[nb]) {
              flags[nb] = true;
              changed = true;
            }
          }
        }
      }
    }
  }

  SurfaceMesh out = copy_shell(mesh);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& q = mesh.cells[c];
    const Region reg = mesh.cell_region[c];
    const int patch = mesh.cell_patch[c];
    if (!flags[c]) {
      push_cell(out, q, reg, patch, c);
      continue;
    }
    const auto& geo = mesh.patch_geometry[patch];
    const int m01 = get_or_create_midpoint(out, q[0], q[1], geo);
    const int m12 = get_or_create_midpoint(out, q[1], q[2], geo);
    const int m23 = get_or_create_midpoint(out, q[2], q[3], geo);
    const int m30 = get_or_create_midpoint(out, q[3], q[0], geo);
    const Vec3 center = geo.project(
        bilinear_eval({mesh.nodes[q[0]], mesh.nodes[q[1]], mesh.nodes[q[2]],
                       mesh.nodes[q[3]]},
                      0.5, 0.5)
            .point);
    const int cc = out.n_nodes();
    out.nodes.push_back(center);
    out.node_origin.push_back({NodeOrigin::Kind::CellCenter, -1, -1, c});
    out.midpoint_parents.resize(out.nodes.size(), {-1, -1});

    const int first_new = out.n_cells();
    push_cell(out, {q[0], m01, cc, m30}, reg, patch, c);
    push_cell(out, {m01, q[1], m12, cc}, reg, patch, c);
    push_cell(out, {cc, m12, q[2], m23}, reg, patch, c);
    push_cell(out, {m30, cc, m23, q[3]}, reg, patch, c);
    check_children(out, first_new, c);
  }
  return out;
}

SurfaceMesh bisect_cells(const SurfaceMesh& mesh, const std::vector<bool>& flags) {
  if (static_cast<int>(flags.size()) != mesh.n_cells())
    throw MeshError("bisection flag vector does not match cell count");
  SurfaceMesh out = copy_shell(mesh);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& q = mesh.cells[c];
    const Region reg = mesh.cell_region[c];
    const int patch = mesh.cell_patch[c];
    if (!flags[c]) {
      push_cell(out, q, reg, patch, c);
      continue;
    }
    const auto& geo = mesh.patch_geometry[patch];
    const CellPoint mid = cell_geometry(mesh, c, 0.5, 0.5);
    const int first_new = out.n_cells();
    if (mid.t_u.norm() >= mid.t_v.norm()) {
      const int mb = get_or_create_midpoint(out, q[0], q[1], geo);
      const int mt = get_or_create_midpoint(out, q[3], q[2], geo);
      push_cell(out, {q[0], mb, mt, q[3]}, reg, patch, c);
      push_cell(out, {mb, q[1], q[2], mt}, reg, patch, c);
    } else {
      const int ml = get_or_create_midpoint(out, q[0], q[3], geo);
      const int mr = get_or_create_midpoint(out, q[1], q[2], geo);
      push_cell(out, {q[0], q[1], mr, ml}, reg, patch, c);
      push_cell(out, {ml, mr, q[2], q[3]}, reg, patch, c);
    }
    check_children(out, first_new, c);
  }
  return out;
}

} // namespace ntt
