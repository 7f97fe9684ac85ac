#include "ntt/dofs.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace ntt {

namespace {

// Which patches use a given full edge.
std::map<std::pair<int, int>, std::set<int>> edge_patches(const SurfaceMesh& m) {
  std::map<std::pair<int, int>, std::set<int>> out;
  for (int c = 0; c < m.n_cells(); ++c)
    for (int e = 0; e < 4; ++e)
      out[SurfaceMesh::edge_key(m.cells[c][e], m.cells[c][(e + 1) % 4])]
          .insert(m.cell_patch[c]);
  return out;
}

} // namespace

DofLayout build_dofs(const SurfaceMesh& mesh) {
  DofLayout d;
  d.mesh = &mesh;

  const auto on_edge = edge_patches(mesh);
  const auto hanging_on = [&](int node, int patch) {
    if (node >= static_cast<int>(mesh.midpoint_parents.size())) return false;
    const auto par = mesh.midpoint_parents[node];
    if (par.first < 0) return false;
    auto it = on_edge.find(par);
    return it != on_edge.end() && it->second.count(patch) > 0;
  };

  // Collect (node, patch) incidences from cell corners.
  std::set<std::pair<int, int>> incidences;
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int corner = 0; corner < 4; ++corner)
      incidences.insert({mesh.cells[c][corner], mesh.cell_patch[c]});

  for (const auto& [node, patch] : incidences) {
    if (hanging_on(node, patch)) continue;
    const int id = d.n_dofs++;
    d.dof_node.push_back(node);
    d.dof_patch.push_back(patch);
    const Region r = mesh.patch_region[patch];
    d.dof_region.push_back(r);
    d.dirichlet.push_back(r == Region::Inflow);
    d.fs.push_back(r == Region::FreeSurface);
    d.dof_of[{node, patch}] = id;
  }

  // Hanging incidences interpolate their edge parents; parents can in turn
  // hang on the same patch, so resolve recursively.
  std::map<std::pair<int, int>, DofLayout::Scatter> resolved;
  const std::function<const DofLayout::Scatter&(int, int)> resolve =
      [&](int node, int patch) -> const DofLayout::Scatter& {
    const auto key = std::make_pair(node, patch);
    auto it = resolved.find(key);
    if (it != resolved.end()) return it->second;
    DofLayout::Scatter s;
    auto at = d.dof_of.find(key);
    if (at != d.dof_of.end()) {
      s.push_back({at->second, 1.0});
    } else {
      const auto par = mesh.midpoint_parents[node];
      for (const auto& [dof, w] : resolve(par.first, patch))
        s.push_back({dof, 0.5 * w});
      for (const auto& [dof, w] : resolve(par.second, patch))
        s.push_back({dof, 0.5 * w});
    }
    return resolved.emplace(key, std::move(s)).first->second;
  };

  d.cell_scatter.resize(mesh.n_cells());
  d.dof_cells.resize(d.n_dofs);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int corner = 0; corner < 4; ++corner) {
      d.cell_scatter[c][corner] = resolve(mesh.cells[c][corner], mesh.cell_patch[c]);
      for (const auto& [dof, w] : d.cell_scatter[c][corner]) {
        (void)w;
        auto& lst = d.dof_cells[dof];
        if (lst.empty() || lst.back() != c) lst.push_back(c);
      }
    }
  }
  for (auto& lst : d.dof_cells) {
    std::sort(lst.begin(), lst.end());
    lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
  }

  // Node groups and the row plan. The integral equation is collocated once
  // per node: in the Dirichlet dof's derivative row when the node touches
  // the inflow plane, otherwise in the potential row of the lowest dof.
  std::map<int, std::vector<int>> by_node;
  for (int i = 0; i < d.n_dofs; ++i) by_node[d.dof_node[i]].push_back(i);

  d.phi_row.assign(d.n_dofs, PhiRow::Integral);
  d.gamma_row.assign(d.n_dofs, GammaRow::Projection);
  d.continuity_with.assign(d.n_dofs, -1);
  d.node_group.resize(mesh.n_nodes());
  for (auto& [node, group] : by_node) {
    d.node_group[node] = group;
    int rep = -1;
    for (int i : group)
      if (d.dirichlet[i]) {
        if (rep >= 0)
          throw std::logic_error("node with two prescribed-potential dofs");
        rep = i;
      }
    if (rep >= 0) {
      d.phi_row[rep] = PhiRow::Dirichlet;
      d.gamma_row[rep] = GammaRow::Integral;
    } else {
      rep = group.front();
      d.phi_row[rep] = PhiRow::Integral;
    }
    for (int i : group)
      if (i != rep) {
        d.phi_row[i] = PhiRow::Continuity;
        d.continuity_with[i] = rep;
      }
  }
  return d;
}

} // namespace ntt
