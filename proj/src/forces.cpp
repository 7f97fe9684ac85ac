#include "ntt/forces.hpp"

#include <cmath>

#include "ntt/quadrature.hpp"

namespace ntt {

double bernoulli_constant(const AsymptoticFlow& flow, double gravity, double t) {
  const Vec3 origin = Vec3::Zero();
  return flow.potential_t(origin, t) + 0.5 * flow.velocity(origin, t).squaredNorm() +
         gravity * flow.elevation(0.0, t);
}

double buoyancy_scale(double a, double b, double c, double rho, double gravity) {
  return rho * gravity * (4.0 / 3.0) * M_PI * a * b * c;
}

Vec3 hull_force(const DofLayout& d, const BemGeometry& g, const FsParams& p,
                const AsymptoticFlow& flow, const Vec& phi, const Vec& gamma,
                const Vec& phidot, double t) {
  const double C = bernoulli_constant(flow, p.gravity, t);
  const auto& rule = quad_rule_regular();
  Vec3 F = Vec3::Zero();
  for (int c = 0; c < d.mesh->n_cells(); ++c) {
    if (d.mesh->cell_region[c] != Region::Hull) continue;
    std::array<double, 4> fphi{}, fgam{}, fpd{};
    for (int k = 0; k < 4; ++k)
      for (const auto& [dof, w] : d.cell_scatter[c][k]) {
        fphi[k] += w * phi[dof];
        fgam[k] += w * gamma[dof];
        fpd[k] += w * phidot[dof];
      }
    for (const auto& qp : rule) {
      const CellPoint cp = bilinear_eval(g.corners[c], qp.u, qp.v);
      const auto shp = quad_shape(qp.u, qp.v);
      double gam = 0, pd = 0;
      for (int k = 0; k < 4; ++k) {
        gam += shp[k] * fgam[k];
        pd += shp[k] * fpd[k];
      }
      const Vec3 gphi = surface_gradient(cp, fphi, qp.u, qp.v) + gam * cp.normal;
      const Vec3 vtot = flow.velocity(cp.point, t) + gphi;
      const double pressure =
          p.rho * (C - pd - flow.potential_t(cp.point, t) -
                   0.5 * vtot.squaredNorm() - p.gravity * cp.point.z());
      F += cp.jacobian * qp.w * pressure * cp.normal;
    }
  }
  return F;
}

} // namespace ntt
