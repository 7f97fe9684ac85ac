#include "ntt/system.hpp"

#include <algorithm>

namespace ntt {

TowingTankSystem::TowingTankSystem(const DofLayout& dofs,
                                   const AsymptoticFlow& flow,
                                   const SystemParams& params)
    : d_(&dofs), flow_(&flow), p_(params) {
  zref_ = reference_elevation(dofs);
  all_cells_.resize(dofs.mesh->n_cells());
  for (int c = 0; c < dofs.mesh->n_cells(); ++c) all_cells_[c] = c;
  is_host_.assign(dofs.n_dofs, 0);
  for (int i = 0; i < dofs.n_dofs; ++i)
    if (dofs.phi_row[i] == PhiRow::Integral ||
        dofs.gamma_row[i] == GammaRow::Integral) {
      is_host_[i] = 1;
      host_rows_.push_back(i);
    }
}

Vec TowingTankSystem::reference_state() const {
  Vec y = Vec::Zero(size());
  y.tail(n()) = zref_;
  return y;
}

BemGeometry TowingTankSystem::geometry(const Vec& z) const {
  return bem_geometry(*d_, z);
}

void TowingTankSystem::move_column(BemGeometry& g, const Vec& z, int k) const {
  g.colloc[k].z() = z[k];
  if (g.bie_cell[k] < 0) g.bie_point[k] = g.colloc[k];
  for (int c : d_->dof_cells[k]) {
    for (int corner = 0; corner < 4; ++corner) {
      Vec3 pos = Vec3::Zero();
      for (const auto& [dof, w] : d_->cell_scatter[c][corner])
        pos += w * g.colloc[dof];
      g.corners[c][corner] = pos;
    }
    const auto& q = g.corners[c];
    g.diagonal[c] = std::max((q[2] - q[0]).norm(), (q[3] - q[1]).norm());
    // Shifted collocation points riding on this cell move with it.
    for (int corner = 0; corner < 4; ++corner)
      for (const auto& [dof, w] : d_->cell_scatter[c][corner])
        if (g.bie_cell[dof] == c)
          g.bie_point[dof] =
              bilinear_eval(g.corners[c], g.bie_u[dof], g.bie_v[dof]).point;
  }
}

Vec TowingTankSystem::residual(const Vec& ydot, const Vec& y, double t) const {
  const int nn = n();
  const Vec phi = y.head(nn);
  const Vec gamma = y.segment(nn, nn);
  const Vec z = y.tail(nn);
  const Vec phidot = ydot.head(nn);
  const Vec zdot = ydot.tail(nn);

  const BemGeometry g = geometry(z);
  Vec F = Vec::Zero(size());

  Vec bie = Vec::Zero(nn);
  accumulate_bie(*d_, g, host_rows_, all_cells_, phi, gamma, bie);
  Vec og = Vec::Zero(nn), oz = Vec::Zero(nn);
  accumulate_weak_rows(*d_, g, p_.fs, *flow_, phi, gamma, zdot, phidot, t,
                       p_.unsteady, all_cells_, og, oz);

  for (int i = 0; i < nn; ++i) {
    switch (d_->phi_row[i]) {
      case PhiRow::Dirichlet: F[i] = phi[i]; break;
      case PhiRow::Continuity: F[i] = phi[i] - phi[d_->continuity_with[i]]; break;
      case PhiRow::Integral: F[i] = bie[i]; break;
    }
    F[nn + i] = d_->gamma_row[i] == GammaRow::Integral ? bie[i] : og[i];
    F[2 * nn + i] = d_->fs[i] ? oz[i] : z[i] - zref_[i];
  }
  return F;
}

Mat TowingTankSystem::jacobian(const Vec& ydot, const Vec& y, double t,
                               double c) const {
  const int nn = n();
  const Vec phi = y.head(nn);
  const Vec gamma = y.segment(nn, nn);
  const Vec z = y.tail(nn);
  const Vec phidot = ydot.head(nn);
  const Vec zdot = ydot.tail(nn);
  const BemGeometry g = geometry(z);

  Mat N = Mat::Zero(nn, nn), D = Mat::Zero(nn, nn);
  assemble_influence(*d_, g, host_rows_, all_cells_, 1.0, N, D);
  const Mat Aphi = bie_phi_matrix(N, g);
  const Mat M = assemble_mass(*d_, g);

  Mat J = Mat::Zero(size(), size());
  for (int i = 0; i < nn; ++i) {
    switch (d_->phi_row[i]) {
      case PhiRow::Dirichlet: J(i, i) = 1; break;
      case PhiRow::Continuity:
        J(i, i) = 1;
        J(i, d_->continuity_with[i]) = -1;
        break;
      case PhiRow::Integral:
        J.block(i, 0, 1, nn) = Aphi.row(i);
        J.block(i, nn, 1, nn) = -D.row(i);
        break;
    }
    if (d_->gamma_row[i] == GammaRow::Integral) {
      J.block(nn + i, 0, 1, nn) = Aphi.row(i);
      J.block(nn + i, nn, 1, nn) = -D.row(i);
    } else {
      J.block(nn + i, nn, 1, nn) = M.row(i);
    }
    if (!d_->fs[i]) J(2 * nn + i, 2 * nn + i) = 1;
  }

  // Elevation rows against potential and derivative columns of free-surface
  // dofs: differenced over the cells the column touches.
  for (int k = 0; k < nn; ++k) {
    if (!d_->fs[k]) continue;
    std::vector<int> cells;
    for (int cc : d_->dof_cells[k])
      if (d_->mesh->cell_region[cc] == Region::FreeSurface) cells.push_back(cc);
    for (int block = 0; block < 2; ++block) {
      const int col = block * nn + k;
      const double h = p_.fd_eps * (1 + std::abs(y[col]));
      Vec dz[2];
      for (int s = 0; s < 2; ++s) {
        const double step = s == 0 ? h : -h;
        Vec phi_p = phi, gamma_p = gamma, phidot_p = phidot;
        if (block == 0) {
          phi_p[k] += step;
          phidot_p[k] += c * step;
        } else {
          gamma_p[k] += step;
        }
        Vec og = Vec::Zero(nn), oz = Vec::Zero(nn);
        accumulate_weak_rows(*d_, g, p_.fs, *flow_, phi_p, gamma_p, zdot,
                             phidot_p, t, p_.unsteady, cells, og, oz);
        dz[s] = oz;
      }
      const Vec col_v = (dz[0] - dz[1]) / (2 * h);
      for (int i = 0; i < nn; ++i)
        if (d_->fs[i] && col_v[i] != 0) J(2 * nn + i, col) = col_v[i];
    }
  }

  // Elevation columns: geometry enters every integral over adjacent cells,
  // plus the whole collocation row of the moved dof.
  for (int k = 0; k < nn; ++k) {
    const int col = 2 * nn + k;
    const double h = p_.fd_eps * (1 + std::abs(z[k]));
    const std::vector<int>& Sk = d_->dof_cells[k];
    // Rows whose collocation point itself moves with this column see their
    // whole integral change; everyone else only the integrals over Sk.
    std::vector<int> local_rows, full_rows;
    for (int r : host_rows_) {
      bool moves = r == k;
      if (!moves && g.bie_cell[r] >= 0)
        moves = std::find(Sk.begin(), Sk.end(), g.bie_cell[r]) != Sk.end();
      (moves ? full_rows : local_rows).push_back(r);
    }

    Vec bie_d[2], og_d[2], oz_d[2];
    for (int s = 0; s < 2; ++s) {
      const double step = s == 0 ? h : -h;
      Vec z_p = z, zdot_p = zdot;
      z_p[k] += step;
      zdot_p[k] += c * step;
      BemGeometry gp = g;
      move_column(gp, z_p, k);

      Vec bie = Vec::Zero(nn);
      accumulate_bie(*d_, gp, local_rows, Sk, phi, gamma, bie);
      if (!full_rows.empty())
        accumulate_bie(*d_, gp, full_rows, all_cells_, phi, gamma, bie);
      Vec og = Vec::Zero(nn), oz = Vec::Zero(nn);
      accumulate_weak_rows(*d_, gp, p_.fs, *flow_, phi, gamma, zdot_p, phidot,
                           t, p_.unsteady, Sk, og, oz);
      bie_d[s] = bie;
      og_d[s] = og;
      oz_d[s] = oz;
    }
    const Vec dbie = (bie_d[0] - bie_d[1]) / (2 * h);
    const Vec dog = (og_d[0] - og_d[1]) / (2 * h);
    const Vec doz = (oz_d[0] - oz_d[1]) / (2 * h);
    for (int i = 0; i < nn; ++i) {
      if (dbie[i] != 0) {
        if (d_->phi_row[i] == PhiRow::Integral) J(i, col) += dbie[i];
        if (d_->gamma_row[i] == GammaRow::Integral) J(nn + i, col) += dbie[i];
      }
      if (d_->gamma_row[i] == GammaRow::Projection && dog[i] != 0)
        J(nn + i, col) += dog[i];
      if (d_->fs[i] && doz[i] != 0) J(2 * nn + i, col) += doz[i];
    }
  }
  return J;
}

Mat TowingTankSystem::jacobian_fd(const Vec& ydot, const Vec& y, double t,
                                  double c) const {
  Mat J(size(), size());
  for (int col = 0; col < size(); ++col) {
    const double h = p_.fd_eps * (1 + std::abs(y[col]));
    Vec yp = y, yd = ydot;
    yp[col] += h;
    yd[col] += c * h;
    const Vec fp = residual(yd, yp, t);
    yp[col] = y[col] - h;
    yd[col] = ydot[col] - c * h;
    const Vec fm = residual(yd, yp, t);
    J.col(col) = (fp - fm) / (2 * h);
  }
  return J;
}

} // namespace ntt
