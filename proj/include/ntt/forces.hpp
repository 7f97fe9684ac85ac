#pragma once

#include "ntt/fsops.hpp"

namespace ntt {

/// Pressure force on the hull from Bernoulli's equation,
///   p = rho (C(t) - dphi/dt - dphi_inf/dt - 1/2 |grad phi_inf + grad phi|^2 - g z),
/// integrated with the cell normals, which point out of the fluid into the
/// body. phidot is the potential time derivative in the grid frame; hull
/// nodes do not move, so it equals the fixed-point derivative there.
Vec3 hull_force(const DofLayout& d, const BemGeometry& g, const FsParams& p,
                const AsymptoticFlow& flow, const Vec& phi, const Vec& gamma,
                const Vec& phidot, double t);

/// Bernoulli constant of the asymptotic flow, evaluated at the origin.
double bernoulli_constant(const AsymptoticFlow& flow, double gravity, double t);

/// Reference load rho g V of the submerged spheroid with semi-axes (a,b,c).
double buoyancy_scale(double a, double b, double c, double rho, double gravity);

} // namespace ntt
