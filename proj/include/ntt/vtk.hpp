#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ntt/bem.hpp"

namespace ntt {

/// Legacy ASCII VTK unstructured-grid writer with deterministic %.9g
/// number formatting. Per-dof fields are reduced to per-node scalars by
/// averaging a node's dofs; hanging nodes interpolate their parents. When
/// `elevation` is given, node z coordinates are replaced the same way.
void write_vtk(const std::string& path, const DofLayout& d,
               const std::vector<std::pair<std::string, Vec>>& dof_fields,
               const Vec* elevation = nullptr);

} // namespace ntt
