#include "ntt/mesh_builders.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <tuple>

namespace ntt {

SurfaceMesh build_spheroid_mesh(const Vec3& center, const Vec3& semi_axes) {
  SurfaceMesh m;
  const auto geo = GeometryDescriptor::spheroid(center, semi_axes);
  const int patch = m.add_patch(Region::Hull, geo);
  const double a = semi_axes.x(), b = semi_axes.y(), c = semi_axes.z();
  m.nodes = {
      center + Vec3(a, 0, 0),   // fore pole
      center + Vec3(-a, 0, 0),  // aft pole
      center + Vec3(0, b, 0),  center + Vec3(0, 0, c),
      center + Vec3(0, -b, 0), center + Vec3(0, 0, -c),
  };
  // Lunes between consecutive meridians; corner order makes the normal
  // point toward the center, out of the surrounding fluid.
  const int eq[4] = {2, 3, 4, 5};
  for (int k = 0; k < 4; ++k) {
    m.cells.push_back({0, eq[(k + 1) % 4], 1, eq[k]});
    m.cell_region.push_back(Region::Hull);
    m.cell_patch.push_back(patch);
  }
  m.midpoint_parents.assign(m.nodes.size(), {-1, -1});
  m.node_origin.assign(m.nodes.size(), NodeOrigin{});
  m.parent_cell.assign(m.cells.size(), -1);
  return m;
}

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = a + (b - a) * i / n;
  return v;
}

using NodeKey = std::tuple<std::int64_t, std::int64_t, std::int64_t>;

NodeKey key_of(const Vec3& p) {
  return {std::llround(p.x() * 1e7), std::llround(p.y() * 1e7),
          std::llround(p.z() * 1e7)};
}

struct FaceBuilder {
  SurfaceMesh& mesh;
  std::map<NodeKey, int> seen;

  int node(const Vec3& p) {
    const auto key = key_of(p);
    auto it = seen.find(key);
    if (it != seen.end()) return it->second;
    const int id = mesh.n_nodes();
    mesh.nodes.push_back(p);
    seen[key] = id;
    return id;
  }

  // Structured face: point(s,t) with s in ss, t in ts; quads ordered so the
  // normal is t_s x t_t.
  void face(const std::vector<double>& ss, const std::vector<double>& ts,
            const std::function<Vec3(double, double)>& point, Region region,
            const GeometryDescriptor& geo) {
    const int patch = mesh.add_patch(region, geo);
    const int ns = static_cast<int>(ss.size()), nt = static_cast<int>(ts.size());
    std::vector<int> ids(ns * nt);
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < nt; ++j) ids[i * nt + j] = node(point(ss[i], ts[j]));
    for (int i = 0; i + 1 < ns; ++i)
      for (int j = 0; j + 1 < nt; ++j) {
        mesh.cells.push_back({ids[i * nt + j], ids[(i + 1) * nt + j],
                              ids[(i + 1) * nt + j + 1], ids[i * nt + j + 1]});
        mesh.cell_region.push_back(region);
        mesh.cell_patch.push_back(patch);
      }
  }
};

} // namespace

SurfaceMesh build_box_mesh(const DomainParams& p) {
  SurfaceMesh m;
  FaceBuilder fb{m, {}};
  const double x0 = -p.upstream, x1 = p.downstream;
  const double y0 = -p.width / 2, y1 = p.width / 2;
  const double z0 = -p.depth, z1 = 0.0;
  const auto xs = linspace(x0, x1, p.nx);
  const auto ys = linspace(y0, y1, p.ny);
  const auto zs = linspace(z0, 0.0, p.nz);
  const auto plane = [](const Vec3& pt, const Vec3& n) {
    return GeometryDescriptor::plane(pt, n);
  };
  // Top, normal +z (out of the fluid).
  fb.face(xs, ys, [&](double x, double y) { return Vec3(x, y, z1); },
          Region::FreeSurface, plane({0, 0, z1}, {0, 0, 1}));
  // Bottom, normal -z: (y,x) ordering.
  fb.face(ys, xs, [&](double y, double x) { return Vec3(x, y, z0); },
          Region::Bottom, plane({0, 0, z0}, {0, 0, -1}));
  // Inflow x = x0, normal -x: (z,y) ordering.
  fb.face(zs, ys, [&](double z, double y) { return Vec3(x0, y, z); },
          Region::Inflow, plane({x0, 0, 0}, {-1, 0, 0}));
  // Downstream wall x = x1, normal +x: (y,z) ordering.
  fb.face(ys, zs, [&](double y, double z) { return Vec3(x1, y, z); },
          Region::FarField, plane({x1, 0, 0}, {1, 0, 0}));
  // Side wall y = y0, normal -y: (x,z) ordering.
  fb.face(xs, zs, [&](double x, double z) { return Vec3(x, y0, z); },
          Region::FarField, plane({0, y0, 0}, {0, -1, 0}));
  // Side wall y = y1, normal +y: (z,x) ordering.
  fb.face(zs, xs, [&](double z, double x) { return Vec3(x, y1, z); },
          Region::FarField, plane({0, y1, 0}, {0, 1, 0}));

  m.midpoint_parents.assign(m.nodes.size(), {-1, -1});
  m.node_origin.assign(m.nodes.size(), NodeOrigin{});
  m.parent_cell.assign(m.cells.size(), -1);
  return m;
}

SurfaceMesh build_cube_mesh(double size, int n) {
  SurfaceMesh m;
  FaceBuilder fb{m, {}};
  const auto s = linspace(0.0, size, n);
  const auto plane = [](const Vec3& pt, const Vec3& nrm) {
    return GeometryDescriptor::plane(pt, nrm);
  };
  fb.face(s, s, [&](double x, double y) { return Vec3(x, y, size); },
          Region::FreeSurface, plane({0, 0, size}, {0, 0, 1}));
  fb.face(s, s, [&](double y, double x) { return Vec3(x, y, 0); },
          Region::Bottom, plane({0, 0, 0}, {0, 0, -1}));
  fb.face(s, s, [&](double z, double y) { return Vec3(0, y, z); },
          Region::Inflow, plane({0, 0, 0}, {-1, 0, 0}));
  fb.face(s, s, [&](double y, double z) { return Vec3(size, y, z); },
          Region::FarField, plane({size, 0, 0}, {1, 0, 0}));
  fb.face(s, s, [&](double x, double z) { return Vec3(x, 0, z); },
          Region::FarField, plane({0, 0, 0}, {0, -1, 0}));
  fb.face(s, s, [&](double z, double x) { return Vec3(x, size, z); },
          Region::FarField, plane({0, size, 0}, {0, 1, 0}));
  m.midpoint_parents.assign(m.nodes.size(), {-1, -1});
  m.node_origin.assign(m.nodes.size(), NodeOrigin{});
  m.parent_cell.assign(m.cells.size(), -1);
  return m;
}

void append_mesh(SurfaceMesh& dst, const SurfaceMesh& src) {
  const int node_off = dst.n_nodes();
  const int patch_off = static_cast<int>(dst.patch_region.size());
  for (const auto& p : src.nodes) dst.nodes.push_back(p);
  for (size_t i = 0; i < src.patch_region.size(); ++i)
    dst.add_patch(src.patch_region[i], src.patch_geometry[i]);
  for (int c = 0; c < src.n_cells(); ++c) {
    const auto& q = src.cells[c];
    dst.cells.push_back(
        {q[0] + node_off, q[1] + node_off, q[2] + node_off, q[3] + node_off});
    dst.cell_region.push_back(src.cell_region[c]);
    dst.cell_patch.push_back(src.cell_patch[c] + patch_off);
  }
  for (const auto& [key, mid] : src.edge_midpoint)
    dst.edge_midpoint[{key.first + node_off, key.second + node_off}] =
        mid + node_off;
  dst.midpoint_parents.resize(dst.nodes.size(), {-1, -1});
  for (int i = 0; i < src.n_nodes(); ++i) {
    const auto par = src.midpoint_parents[i];
    if (par.first >= 0)
      dst.midpoint_parents[i + node_off] = {par.first + node_off,
                                            par.second + node_off};
  }
  dst.node_origin.resize(dst.nodes.size());
  dst.parent_cell.resize(dst.cells.size(), -1);
}

SurfaceMesh build_domain_mesh(const DomainParams& p) {
  if (p.submergence <= p.hull_radius)
    throw MeshError("hull reaches the free surface: submergence must exceed the radius");
  SurfaceMesh m = build_box_mesh(p);
  SurfaceMesh hull = build_spheroid_mesh(
      Vec3(0, 0, -p.submergence),
      Vec3(p.hull_length / 2, p.hull_radius, p.hull_radius));
  append_mesh(m, hull);

  for (int cycle = 0; cycle < p.hull_curvature_cycles; ++cycle) {
    std::vector<bool> flags(m.n_cells(), false);
    bool any = false;
    for (int c = 0; c < m.n_cells(); ++c)
      if (m.cell_region[c] == Region::Hull &&
          cell_normal_spread(m, c) > p.curvature_angle)
        flags[c] = any = true;
    if (!any) break;
    m = refine_cells(m, flags);
  }

  for (int sweep = 0; sweep < 8; ++sweep) {
    std::vector<bool> flags(m.n_cells(), false);
    bool any = false;
    for (int c = 0; c < m.n_cells(); ++c)
      if (cell_aspect_ratio(m, c) > p.max_aspect) flags[c] = any = true;
    if (!any) break;
    m = bisect_cells(m, flags);
  }

  for (int cycle = 0; cycle < p.fs_cycles; ++cycle) {
    const double radius = p.fs_focus_radius * std::pow(0.5, cycle);
    std::vector<bool> flags(m.n_cells(), false);
    bool any = false;
    for (int c = 0; c < m.n_cells(); ++c) {
      if (m.cell_region[c] != Region::FreeSurface) continue;
      const Vec3 ctr = cell_geometry(m, c, 0.5, 0.5).point;
      if (ctr.head<2>().norm() < radius) flags[c] = any = true;
    }
    if (!any) break;
    m = refine_cells(m, flags);
  }

  // Builder-internal provenance is meaningless to callers; present the
  // result as a fresh mesh.
  for (auto& o : m.node_origin) o = NodeOrigin{};
  for (auto& c : m.parent_cell) c = -1;
  m.validate();
  return m;
}

} // namespace ntt
