#include "ntt/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "ntt/fsops.hpp"

namespace ntt {

namespace {

struct EdgeRef {
  int cell = -1, edge = -1;
};

void edge_ref_coords(int edge, double t, double& u, double& v) {
  switch (edge) {
    case 0: u = t; v = 0; break;
    case 1: u = 1; v = t; break;
    case 2: u = 1 - t; v = 1; break;
    default: u = 0; v = 1 - t; break;
  }
}

std::array<double, 4> cell_values(const DofLayout& d, int cell, const Vec& x) {
  std::array<double, 4> f{};
  for (int k = 0; k < 4; ++k)
    for (const auto& [dof, w] : d.cell_scatter[cell][k]) f[k] += w * x[dof];
  return f;
}

// Outward co-normal derivative of the field along edge `edge` of `cell`,
// at traversal parameter t.
double conormal_deriv(const DofLayout& d, const BemGeometry& g, int cell,
                      int edge, double t, const Vec& field) {
  double u, v;
  edge_ref_coords(edge, t, u, v);
  const CellPoint cp = bilinear_eval(g.corners[cell], u, v);
  const auto f = cell_values(d, cell, field);
  const Vec3 grad = surface_gradient(cp, f, u, v);
  Vec3 dir;
  switch (edge) {
    case 0: dir = cp.t_u; break;
    case 1: dir = cp.t_v; break;
    case 2: dir = -cp.t_u; break;
    default: dir = -cp.t_v; break;
  }
  const Vec3 conormal = dir.cross(cp.normal).normalized();
  return grad.dot(conormal);
}

double edge_param_of(const BemGeometry& g, const EdgeRef& er, const Vec3& x) {
  const Vec3& a = g.corners[er.cell][er.edge];
  const Vec3& b = g.corners[er.cell][(er.edge + 1) % 4];
  const Vec3 ab = b - a;
  return std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
}

} // namespace

std::vector<double> kelly_indicator(const DofLayout& d, const Vec& z) {
  const SurfaceMesh& m = *d.mesh;
  const BemGeometry g = bem_geometry(d, z);
  std::vector<double> out(m.n_cells(), 0.0);

  std::map<std::pair<int, int>, std::vector<EdgeRef>> edges;
  for (int c = 0; c < m.n_cells(); ++c) {
    if (m.cell_region[c] != Region::FreeSurface) continue;
    for (int e = 0; e < 4; ++e)
      edges[SurfaceMesh::edge_key(m.cells[c][e], m.cells[c][(e + 1) % 4])]
          .push_back({c, e});
  }
  const auto neighbour_on = [&](std::pair<int, int> key,
                                int self) -> EdgeRef {
    auto it = edges.find(key);
    if (it == edges.end()) return {};
    for (const auto& er : it->second)
      if (er.cell != self) return er;
    return {};
  };
  const auto is_parent_of = [&](int mid, int end) {
    if (mid >= static_cast<int>(m.midpoint_parents.size())) return -1;
    const auto p = m.midpoint_parents[mid];
    if (p.first == end) return p.second;
    if (p.second == end) return p.first;
    return -1;
  };

  // 2-point Gauss on a parameter interval.
  const double gx[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};

  for (int c = 0; c < m.n_cells(); ++c) {
    if (m.cell_region[c] != Region::FreeSurface) continue;
    double sum = 0;
    for (int e = 0; e < 4; ++e) {
      const int na = m.cells[c][e], nb = m.cells[c][(e + 1) % 4];
      // Sub-intervals of this edge with the neighbour of each.
      struct Piece {
        double t0, t1;
        EdgeRef nb;
      };
      std::vector<Piece> pieces;
      if (EdgeRef er = neighbour_on(SurfaceMesh::edge_key(na, nb), c); er.cell >= 0) {
        pieces.push_back({0, 1, er});
      } else if (int mid = m.find_midpoint(na, nb); mid >= 0) {
        // Edge split by finer neighbours.
        if (EdgeRef lo = neighbour_on(SurfaceMesh::edge_key(na, mid), c); lo.cell >= 0)
          pieces.push_back({0, 0.5, lo});
        if (EdgeRef hi = neighbour_on(SurfaceMesh::edge_key(mid, nb), c); hi.cell >= 0)
          pieces.push_back({0.5, 1, hi});
      } else {
        // This edge may be half of a coarser neighbour's edge.
        int other = is_parent_of(na, nb);
        if (other < 0) other = is_parent_of(nb, na);
        const int hang = other < 0 ? -1 : (is_parent_of(na, nb) >= 0 ? na : nb);
        if (other >= 0) {
          const int far_end = hang == na ? nb : na;
          if (EdgeRef er = neighbour_on(SurfaceMesh::edge_key(far_end, other), c);
              er.cell >= 0)
            pieces.push_back({0, 1, er});
        }
      }
      for (const auto& piece : pieces) {
        for (double gp : gx) {
          const double t = piece.t0 + (piece.t1 - piece.t0) * gp;
          double u, v;
          edge_ref_coords(e, t, u, v);
          const CellPoint cp = bilinear_eval(g.corners[c], u, v);
          const double own = conormal_deriv(d, g, c, e, t, z);
          const double tn = edge_param_of(g, piece.nb, cp.point);
          const double nb_val =
              conormal_deriv(d, g, piece.nb.cell, piece.nb.edge, tn, z);
          const double jump = own + nb_val;
          Vec3 dir;
          switch (e) {
            case 0: dir = cp.t_u; break;
            case 1: dir = cp.t_v; break;
            case 2: dir = -cp.t_u; break;
            default: dir = -cp.t_v; break;
          }
          const double ds = dir.norm() * (piece.t1 - piece.t0) * 0.5;
          sum += jump * jump * ds;
        }
      }
    }
    out[c] = g.diagonal[c] / 24.0 * sum;
  }
  return out;
}

std::vector<bool> mark_top_fraction(const SurfaceMesh& mesh,
                                    const std::vector<double>& indicator,
                                    double fraction) {
  std::vector<int> fs_cells;
  for (int c = 0; c < mesh.n_cells(); ++c)
    if (mesh.cell_region[c] == Region::FreeSurface) fs_cells.push_back(c);
  std::vector<bool> flags(mesh.n_cells(), false);
  if (fs_cells.empty() || fraction <= 0) return flags;
  const int count = std::min<int>(
      fs_cells.size(),
      static_cast<int>(std::ceil(fraction * static_cast<double>(fs_cells.size()))));
  std::stable_sort(fs_cells.begin(), fs_cells.end(), [&](int a, int b) {
    if (indicator[a] != indicator[b]) return indicator[a] > indicator[b];
    return a < b;
  });
  for (int i = 0; i < count; ++i) flags[fs_cells[i]] = true;
  return flags;
}

Vec transfer_state(const DofLayout& from, const DofLayout& to, const Vec& y) {
  const int n_old = from.n_dofs, n_new = to.n_dofs;
  const SurfaceMesh& nm = *to.mesh;

  const std::function<double(int, int, int)> old_val = [&](int node, int patch,
                                                           int block) -> double {
    auto it = from.dof_of.find({node, patch});
    if (it != from.dof_of.end()) return y[block * n_old + it->second];
    const auto par = from.mesh->midpoint_parents[node];
    return 0.5 * (old_val(par.first, patch, block) +
                  old_val(par.second, patch, block));
  };
  const auto new_val = [&](int node, int patch, int block) -> double {
    const NodeOrigin& o = nm.node_origin[node];
    switch (o.kind) {
      case NodeOrigin::Kind::Copied:
        return old_val(o.a, patch, block);
      case NodeOrigin::Kind::Original:
        return old_val(node, patch, block);
      case NodeOrigin::Kind::EdgeMidpoint:
        return 0.5 * (old_val(o.a, patch, block) + old_val(o.b, patch, block));
      case NodeOrigin::Kind::CellCenter: {
        double s = 0;
        for (int k = 0; k < 4; ++k)
          s += old_val(from.mesh->cells[o.cell][k], patch, block);
        return 0.25 * s;
      }
    }
    return 0;
  };

  Vec out(3 * n_new);
  for (int i = 0; i < n_new; ++i)
    for (int block = 0; block < 3; ++block)
      out[block * n_new + i] = new_val(to.dof_node[i], to.dof_patch[i], block);
  return out;
}

} // namespace ntt
