#pragma once

#include "ntt/bem.hpp"

namespace ntt {

/// Per-cell jump indicator for the free-surface elevation: eta_K^2 =
/// (h_K/24) * sum over cell edges of the integrated squared jump of the
/// edge-normal derivative of the elevation. Cells outside the free surface
/// get 0; edges without a free-surface neighbour contribute nothing.
std::vector<double> kelly_indicator(const DofLayout& d, const Vec& z);

/// Flags the ceil(fraction * #free-surface cells) free-surface cells with
/// the largest indicator values, ties resolved by lower cell id.
std::vector<bool> mark_top_fraction(const SurfaceMesh& mesh,
                                    const std::vector<double>& indicator,
                                    double fraction);

/// Interpolates a stacked state (phi, gamma, z) from the dofs of one mesh to
/// the dofs of its refinement: copied nodes keep their values, edge
/// midpoints average their parents, cell centers average the parent cell's
/// corners, all per patch.
Vec transfer_state(const DofLayout& from, const DofLayout& to, const Vec& y);

} // namespace ntt
