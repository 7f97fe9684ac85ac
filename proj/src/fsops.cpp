#include "ntt/fsops.hpp"

#include <cmath>

#include "ntt/quadrature.hpp"

namespace ntt {

double damping_mu(const Vec3& x, const BeachParams& b) {
  const double s = std::max(std::abs(x.x()) - b.x_d, 0.0) / b.L_d;
  return s * s;
}

Vec3 surface_gradient(const CellPoint& cp, const std::array<double, 4>& f,
                      double u, double v) {
  const auto du = quad_shape_du(u, v);
  const auto dv = quad_shape_dv(u, v);
  double fu = 0, fv = 0;
  for (int k = 0; k < 4; ++k) {
    fu += du[k] * f[k];
    fv += dv[k] * f[k];
  }
  const double E = cp.t_u.dot(cp.t_u);
  const double F = cp.t_u.dot(cp.t_v);
  const double G = cp.t_v.dot(cp.t_v);
  const double det = E * G - F * F;
  const double a = (G * fu - F * fv) / det;
  const double b = (E * fv - F * fu) / det;
  return a * cp.t_u + b * cp.t_v;
}

namespace {

std::array<double, 4> corner_values(const DofLayout& d, int cell, const Vec& x) {
  std::array<double, 4> f{};
  for (int k = 0; k < 4; ++k) {
    double s = 0;
    for (const auto& [dof, w] : d.cell_scatter[cell][k]) s += w * x[dof];
    f[k] = s;
  }
  return f;
}

} // namespace

void assemble_dynamic_projection(const DofLayout& d, const BemGeometry& g,
                                 const FsParams& p, const AsymptoticFlow& flow,
                                 const Vec& phi, const Vec& gamma,
                                 const Vec& zdot, double t, bool unsteady,
                                 Mat& Msupg, Vec& b) {
  const auto& rule = quad_rule_regular();
  const Vec3 stream = flow.ramp(t) * Vec3(flow.speed, 0, 0);
  for (int c = 0; c < d.mesh->n_cells(); ++c) {
    if (d.mesh->cell_region[c] != Region::FreeSurface) continue;
    const auto& corners = g.corners[c];
    const double h = g.diagonal[c];
    const auto fphi = corner_values(d, c, phi);
    const auto fgam = corner_values(d, c, gamma);
    const auto fzd = corner_values(d, c, zdot);
    for (const auto& qp : rule) {
      const CellPoint cp = bilinear_eval(corners, qp.u, qp.v);
      const auto shp = quad_shape(qp.u, qp.v);
      double gam = 0, zd = 0;
      for (int k = 0; k < 4; ++k) {
        gam += shp[k] * fgam[k];
        zd += shp[k] * fzd[k];
      }
      const Vec3 gphi = surface_gradient(cp, fphi, qp.u, qp.v) + gam * cp.normal;
      const Vec3 vgrid(0, 0, zd);
      const Vec3 vinf = flow.velocity(cp.point, t);

      double q = 0.5 * gphi.squaredNorm() -
                 p.gravity * (cp.point.z() - flow.elevation(cp.point.x(), t)) +
                 (vgrid - vinf - gphi).dot(gphi);
      if (unsteady) {
        const double P = p.beach.gain * damping_mu(cp.point, p.beach) *
                         (zd - flow.elevation_t(cp.point.x(), t));
        q -= P / p.rho;
      }

      // Test shift along the surface advection velocity; selects the
      // downstream radiation branch of the steady wave train.
      Vec3 dir = stream + gphi - vgrid;
      const double dn = dir.norm();
      const Vec3 shift = dn < 1e-12 ? Vec3::Zero()
                                    : Vec3(p.supg_c * h * dir / dn);

      const double jw = cp.jacobian * qp.w;
      for (int a = 0; a < 4; ++a) {
        std::array<double, 4> e{};
        e[a] = 1.0;
        const double test =
            shp[a] + shift.dot(surface_gradient(cp, e, qp.u, qp.v));
        for (const auto& [di, wi] : d.cell_scatter[c][a]) {
          const double row_w = wi * jw * test;
          b[di] += row_w * q;
          for (int bb = 0; bb < 4; ++bb)
            for (const auto& [dj, wj] : d.cell_scatter[c][bb])
              Msupg(di, dj) += row_w * shp[bb] * wj;
        }
      }
    }
  }
}

void accumulate_weak_rows(const DofLayout& d, const BemGeometry& g,
                          const FsParams& p, const AsymptoticFlow& flow,
                          const Vec& phi, const Vec& gamma, const Vec& zdot,
                          const Vec& phidot, double t, bool unsteady,
                          const std::vector<int>& cells, Vec& out_gamma,
                          Vec& out_z) {
  const auto& rule = quad_rule_regular();
  const Vec3 stream = flow.ramp(t) * Vec3(flow.speed, 0, 0);
  for (int c : cells) {
    const bool fs = d.mesh->cell_region[c] == Region::FreeSurface;
    // Truncation boundaries carry no perturbation flux; the asymptotic flow
    // passes through them freely.
    const bool far = d.mesh->cell_region[c] == Region::FarField;
    const auto& corners = g.corners[c];
    const double h = g.diagonal[c];
    const auto fgam = corner_values(d, c, gamma);
    const auto fphi = fs ? corner_values(d, c, phi) : std::array<double, 4>{};
    const auto fzd = fs ? corner_values(d, c, zdot) : std::array<double, 4>{};
    const auto fpd = fs ? corner_values(d, c, phidot) : std::array<double, 4>{};
    for (const auto& qp : rule) {
      const CellPoint cp = bilinear_eval(corners, qp.u, qp.v);
      const auto shp = quad_shape(qp.u, qp.v);
      double gam = 0, zd = 0, pd = 0;
      for (int k = 0; k < 4; ++k) {
        gam += shp[k] * fgam[k];
        zd += shp[k] * fzd[k];
        pd += shp[k] * fpd[k];
      }
      const Vec3 vgrid = fs ? Vec3(0, 0, zd) : Vec3(0, 0, 0);
      const Vec3 vinf = flow.velocity(cp.point, t);
      const double jw = cp.jacobian * qp.w;

      const double kin = far ? gam : gam - (vgrid - vinf).dot(cp.normal);
      for (int a = 0; a < 4; ++a)
        for (const auto& [di, wi] : d.cell_scatter[c][a])
          out_gamma[di] += jw * shp[a] * wi * kin;

      if (!fs) continue;
      const Vec3 gphi = surface_gradient(cp, fphi, qp.u, qp.v) + gam * cp.normal;
      double q = 0.5 * gphi.squaredNorm() -
                 p.gravity * (cp.point.z() - flow.elevation(cp.point.x(), t)) +
                 (vgrid - vinf - gphi).dot(gphi);
      if (unsteady) {
        const double P = p.beach.gain * damping_mu(cp.point, p.beach) *
                         (zd - flow.elevation_t(cp.point.x(), t));
        q -= P / p.rho;
      }
      Vec3 dir = stream + gphi - vgrid;
      const double dn = dir.norm();
      const Vec3 shift =
          dn < 1e-12 ? Vec3::Zero() : Vec3(p.supg_c * h * dir / dn);
      for (int a = 0; a < 4; ++a) {
        std::array<double, 4> e{};
        e[a] = 1.0;
        const double test =
            shp[a] + shift.dot(surface_gradient(cp, e, qp.u, qp.v));
        for (const auto& [di, wi] : d.cell_scatter[c][a])
          out_z[di] += jw * test * wi * (pd - q);
      }
    }
  }
}

Vec assemble_neumann_rhs(const DofLayout& d, const BemGeometry& g,
                         const AsymptoticFlow& flow, const Vec& zdot, double t) {
  Vec b = Vec::Zero(d.n_dofs);
  const auto& rule = quad_rule_regular();
  for (int c = 0; c < d.mesh->n_cells(); ++c) {
    if (d.mesh->cell_region[c] == Region::FarField) continue;
    const bool fs = d.mesh->cell_region[c] == Region::FreeSurface;
    const auto fzd = fs ? corner_values(d, c, zdot) : std::array<double, 4>{};
    for (const auto& qp : rule) {
      const CellPoint cp = bilinear_eval(g.corners[c], qp.u, qp.v);
      const auto shp = quad_shape(qp.u, qp.v);
      Vec3 v = Vec3::Zero();
      if (fs) {
        double zd = 0;
        for (int k = 0; k < 4; ++k) zd += shp[k] * fzd[k];
        v.z() = zd;
      }
      const double val =
          cp.jacobian * qp.w * (v - flow.velocity(cp.point, t)).dot(cp.normal);
      for (int a = 0; a < 4; ++a)
        for (const auto& [di, wi] : d.cell_scatter[c][a])
          b[di] += val * shp[a] * wi;
    }
  }
  return b;
}

} // namespace ntt
