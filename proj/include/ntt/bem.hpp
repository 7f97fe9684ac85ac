#pragma once

#include <functional>

#include <Eigen/Dense>

#include "ntt/dofs.hpp"

namespace ntt {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Cell corner positions and collocation points derived from the elevation
/// unknowns: a dof sits at (x_node, y_node, z_dof), a hanging corner at the
/// average of its parent dof positions. Non free-surface dofs carry their
/// mesh elevation, so passing the reference elevations reproduces the mesh.
struct BemGeometry {
  std::vector<std::array<Vec3, 4>> corners;  // per cell
  std::vector<double> diagonal;              // per cell
  std::vector<Vec3> colloc;                  // per dof

  // Collocation data of each dof's integral-equation row. Prescribed-
  // potential dofs host a first-kind equation for the flux; collocating it
  // at the node loses accuracy at patch borders, so their row is collocated
  // at a point shifted into the interior of a host cell. All other dofs
  // collocate at their node (bie_cell = -1).
  std::vector<int> bie_cell;
  std::vector<double> bie_u, bie_v;  // reference coords in the host cell
  std::vector<Vec3> bie_point;
  // Interpolation weights reproducing the potential at the row's
  // collocation point; identity {(dof, 1)} for nodal rows.
  std::vector<std::vector<std::pair<int, double>>> bie_weights;
};

/// Reference elevations (mesh node z per dof).
Vec reference_elevation(const DofLayout& d);

BemGeometry bem_geometry(const DofLayout& d, const Vec& z);

/// Influence matrices, pure kernels without the solid angle:
///   N_ij = int dG/dn_y psi_j,  D_ij = int G psi_j
/// over the given cells, added into N and D (n_dofs x n_dofs) with `sign`
/// for the given collocation rows. The solid angle never appears explicitly:
/// the integral-equation residual is written against potential differences.
void assemble_influence(const DofLayout& d, const BemGeometry& g,
                        const std::vector<int>& rows,
                        const std::vector<int>& cells, double sign, Mat& N,
                        Mat& D);

/// Matrix-free integral-equation residual: for each collocation row r in
/// `rows` adds the integral over `cells` of
///   dG/dn (phi_h - phi_r) - G gamma_h
/// to out[r], with phi_r interpolated at the row's collocation point.
/// Summed over all cells this equals bie_residual row r.
void accumulate_bie(const DofLayout& d, const BemGeometry& g,
                    const std::vector<int>& rows, const std::vector<int>& cells,
                    const Vec& phi, const Vec& gamma, Vec& out);

/// Residual of the integral equation for every row:
///   r_i = sum_j N_ij (phi_j - phi_r(i)) - sum_j D_ij gamma_j
/// with phi_r(i) the interpolated potential at the row's collocation point.
Vec bie_residual(const Mat& N, const Mat& D, const BemGeometry& g,
                 const Vec& phi, const Vec& gamma);

/// d(bie_residual)/d(phi) = N - (N 1) outer the row interpolation weights.
Mat bie_phi_matrix(const Mat& N, const BemGeometry& g);

/// Consistent surface mass matrix, rows restricted to each dof's own cells.
Mat assemble_mass(const DofLayout& d, const BemGeometry& g);

/// Right-hand side of the weak normal-velocity condition:
///   b_i = int psi_i g(x, n) over the cells of dof i.
Vec project_boundary_flux(const DofLayout& d, const BemGeometry& g,
                          const std::function<double(const Vec3&, const Vec3&)>& g_fn);

struct LaplaceSolution {
  Vec phi, gamma;
  int rank_deficiency = 0;  // > 0 when the boundary-value problem is singular
};

/// Mixed boundary-value solve on the mesh geometry: prescribed potential on
/// the inflow region, prescribed normal derivative elsewhere.
LaplaceSolution solve_laplace(
    const DofLayout& d, const std::function<double(const Vec3&)>& dirichlet,
    const std::function<double(const Vec3&, const Vec3&)>& neumann);

struct LaplaceBc {
  std::function<double(const Vec3&)> dirichlet;
  std::function<double(const Vec3&, const Vec3&)> neumann;
};

/// Several boundary-value problems on the same mesh, sharing the influence
/// assembly and the factorization.
std::vector<LaplaceSolution> solve_laplace_many(const DofLayout& d,
                                                const std::vector<LaplaceBc>& bcs);

} // namespace ntt
