#pragma once

#include <vector>

namespace ntt {

struct QuadPoint {
  double u, v, w;
};

/// Tensor Gauss rules on the reference square [0,1]^2. Weights sum to 1.
const std::vector<QuadPoint>& quad_rule_regular();  // 4x4
const std::vector<QuadPoint>& quad_rule_fine();     // 8x8, near-singular cells

/// Rule for integrands with a 1/r singularity at reference point (u0, v0):
/// the square is fanned into triangles from the singular point and each
/// triangle integrated through a degenerate-square map whose Jacobian
/// vanishes linearly at the singularity.
std::vector<QuadPoint> quad_rule_singular(double u0, double v0);

/// Rule for nearly singular integrands peaked near reference point (u0, v0):
/// the square is subdivided adaptively towards the peak until subcells are
/// comparable to `d`, the distance of the field point in units of the cell
/// size, and each leaf gets a tensor Gauss rule.
std::vector<QuadPoint> quad_rule_near(double u0, double v0, double d);

} // namespace ntt
