#pragma once

#include "ntt/bem.hpp"
#include "ntt/flow.hpp"

namespace ntt {

/// Absorbing zone near the inflow/outflow ends of the tank.
struct BeachParams {
  double x_d = 50.0;   // streamwise distance where damping starts
  double L_d = 100.0;  // zone length
  double gain = 1.0;   // scales the damping pressure
};

/// Quadratic onset profile, zero up to x_d and 1 at x_d + L_d.
double damping_mu(const Vec3& x, const BeachParams& b);

struct FsParams {
  double gravity = 9.81;
  double rho = 1000.0;
  double supg_c = 0.5;  // streamline test shift = supg_c * cell diagonal
  BeachParams beach;
};

/// Surface gradient of the bilinear interpolant with corner values f,
/// evaluated from the tangent basis of cp.
Vec3 surface_gradient(const CellPoint& cp, const std::array<double, 4>& f,
                      double u, double v);

/// Dynamic free-surface condition in weak form. Fills the free-surface rows
/// of Msupg (streamline-weighted mass, n x n) and b (weighted right-hand
/// side): the elevation-row residual is Msupg * phidot - b. With supg_c = 0
/// the free-surface rows of Msupg coincide with the plain mass matrix.
void assemble_dynamic_projection(const DofLayout& d, const BemGeometry& g,
                                 const FsParams& p, const AsymptoticFlow& flow,
                                 const Vec& phi, const Vec& gamma,
                                 const Vec& zdot, double t, bool unsteady,
                                 Mat& Msupg, Vec& b);

/// Matrix-free residual contributions of the weak conditions over the given
/// cells, accumulated per dof:
///   out_gamma[i] += int psi_i (gamma_h - (v - grad phi_inf) . n)
/// On far-field truncation cells the projected flux is gamma_h alone: the
/// perturbation does not cross the truncation boundary while the asymptotic
/// flow passes through it freely.
///   out_z[i]     += int (psi_i + d . grad_s psi_i) (phidot_h - q)  (FS cells)
/// Summed over all cells these match the assembled operator residuals.
void accumulate_weak_rows(const DofLayout& d, const BemGeometry& g,
                          const FsParams& p, const AsymptoticFlow& flow,
                          const Vec& phi, const Vec& gamma, const Vec& zdot,
                          const Vec& phidot, double t, bool unsteady,
                          const std::vector<int>& cells, Vec& out_gamma,
                          Vec& out_z);

/// Weak non-penetration data for every dof: b_i = int ((v - grad
/// phi_inf) . n) psi_i, with grid velocity v = (0, 0, zdot) on the free
/// surface and zero elsewhere. Far-field cells contribute nothing.
Vec assemble_neumann_rhs(const DofLayout& d, const BemGeometry& g,
                         const AsymptoticFlow& flow, const Vec& zdot, double t);

} // namespace ntt
