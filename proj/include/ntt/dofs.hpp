#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ntt/mesh.hpp"

namespace ntt {

/// What lives in the potential row of a degree of freedom.
enum class PhiRow : std::uint8_t {
  Dirichlet,   // prescribed potential (inflow)
  Integral,    // boundary-integral equation collocated at the node
  Continuity,  // potential tied to the node-group representative
};

/// What lives in the normal-derivative row.
enum class GammaRow : std::uint8_t {
  Integral,    // boundary-integral equation (Dirichlet dofs host it here)
  Projection,  // weak normal-velocity condition
};

/// Degrees of freedom of the boundary mesh. A dof is a (node, patch)
/// incidence, so nodes shared by several smooth faces carry one value set
/// per face; hanging incidences carry no dof and interpolate their edge
/// parents instead. Each dof owns three unknowns (potential, normal
/// derivative, elevation) and three residual rows.
struct DofLayout {
  const SurfaceMesh* mesh = nullptr;

  int n_dofs = 0;
  std::vector<int> dof_node;
  std::vector<int> dof_patch;
  std::vector<Region> dof_region;
  std::vector<char> dirichlet;  // prescribed-potential dofs
  std::vector<char> fs;         // free-surface dofs (elevation unknowns)

  std::map<std::pair<int, int>, int> dof_of;  // (node, patch) -> dof id

  std::vector<PhiRow> phi_row;
  std::vector<GammaRow> gamma_row;
  std::vector<int> continuity_with;  // representative dof, -1 otherwise

  // Per cell and corner: the dofs a corner value expands into. A regular
  // corner is {(dof, 1)}; a hanging corner splits over its edge parents.
  using Scatter = std::vector<std::pair<int, double>>;
  std::vector<std::array<Scatter, 4>> cell_scatter;

  std::vector<std::vector<int>> dof_cells;   // cells a dof influences
  std::vector<std::vector<int>> node_group;  // dofs per node (multi-dof nodes)

  int dof(int node, int patch) const { return dof_of.at({node, patch}); }
};

DofLayout build_dofs(const SurfaceMesh& mesh);

} // namespace ntt
