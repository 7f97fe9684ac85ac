#include "ntt/vtk.hpp"

#include <cstdio>
#include <functional>
#include <stdexcept>

namespace ntt {

namespace {

std::string fmt(double x) {
  char buf[32];
  if (x == 0) x = 0;  // avoid "-0"
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

// Per-node reduction of a per-dof field.
std::vector<double> node_field(const DofLayout& d, const Vec& f) {
  const SurfaceMesh& m = *d.mesh;
  std::vector<double> out(m.n_nodes(), 0.0);
  std::vector<char> have(m.n_nodes(), 0);
  for (int node = 0; node < m.n_nodes(); ++node) {
    const auto& group = d.node_group[node];
    if (group.empty()) continue;
    double s = 0;
    for (int dof : group) s += f[dof];
    out[node] = s / static_cast<double>(group.size());
    have[node] = 1;
  }
  const std::function<double(int)> resolve = [&](int node) -> double {
    if (have[node]) return out[node];
    const auto par = m.midpoint_parents[node];
    if (par.first < 0) return 0.0;
    return 0.5 * (resolve(par.first) + resolve(par.second));
  };
  for (int node = 0; node < m.n_nodes(); ++node) out[node] = resolve(node);
  return out;
}

} // namespace

void write_vtk(const std::string& path, const DofLayout& d,
               const std::vector<std::pair<std::string, Vec>>& dof_fields,
               const Vec* elevation) {
  const SurfaceMesh& m = *d.mesh;
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open " + path);

  std::fprintf(f, "# vtk DataFile Version 3.0\n");
  std::fprintf(f, "towing tank boundary\nASCII\nDATASET UNSTRUCTURED_GRID\n");
  std::fprintf(f, "POINTS %d double\n", m.n_nodes());
  std::vector<double> zs;
  if (elevation) zs = node_field(d, *elevation);
  for (int i = 0; i < m.n_nodes(); ++i) {
    const Vec3& p = m.nodes[i];
    const double z = elevation ? zs[i] : p.z();
    std::fprintf(f, "%s %s %s\n", fmt(p.x()).c_str(), fmt(p.y()).c_str(),
                 fmt(z).c_str());
  }
  std::fprintf(f, "CELLS %d %d\n", m.n_cells(), 5 * m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto& q = m.cells[c];
    std::fprintf(f, "4 %d %d %d %d\n", q[0], q[1], q[2], q[3]);
  }
  std::fprintf(f, "CELL_TYPES %d\n", m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c) std::fprintf(f, "9\n");

  std::fprintf(f, "CELL_DATA %d\nSCALARS region int 1\nLOOKUP_TABLE default\n",
               m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c)
    std::fprintf(f, "%d\n", static_cast<int>(m.cell_region[c]));

  if (!dof_fields.empty()) {
    std::fprintf(f, "POINT_DATA %d\n", m.n_nodes());
    for (const auto& [name, field] : dof_fields) {
      std::fprintf(f, "SCALARS %s double 1\nLOOKUP_TABLE default\n", name.c_str());
      const auto vals = node_field(d, field);
      for (double v : vals) std::fprintf(f, "%s\n", fmt(v).c_str());
    }
  }
  std::fclose(f);
}

} // namespace ntt
