#include "ntt/bem.hpp"

#include <cmath>

#include "ntt/quadrature.hpp"

namespace ntt {

Vec reference_elevation(const DofLayout& d) {
  Vec z(d.n_dofs);
  for (int i = 0; i < d.n_dofs; ++i) z[i] = d.mesh->nodes[d.dof_node[i]].z();
  return z;
}

// How far the first-kind collocation point of a prescribed-potential dof is
// pulled from its corner toward the host cell center.
constexpr double kFirstKindShift = 0.25;

BemGeometry bem_geometry(const DofLayout& d, const Vec& z) {
  const SurfaceMesh& m = *d.mesh;
  BemGeometry g;
  g.colloc.resize(d.n_dofs);
  for (int i = 0; i < d.n_dofs; ++i) {
    const Vec3& p = m.nodes[d.dof_node[i]];
    g.colloc[i] = Vec3(p.x(), p.y(), z[i]);
  }
  g.corners.resize(m.n_cells());
  g.diagonal.resize(m.n_cells());
  for (int c = 0; c < m.n_cells(); ++c) {
    for (int k = 0; k < 4; ++k) {
      Vec3 pos = Vec3::Zero();
      for (const auto& [dof, w] : d.cell_scatter[c][k]) pos += w * g.colloc[dof];
      g.corners[c][k] = pos;
    }
    const auto& q = g.corners[c];
    g.diagonal[c] = std::max((q[2] - q[0]).norm(), (q[3] - q[1]).norm());
  }

  g.bie_cell.assign(d.n_dofs, -1);
  g.bie_u.assign(d.n_dofs, 0.0);
  g.bie_v.assign(d.n_dofs, 0.0);
  g.bie_point = g.colloc;
  g.bie_weights.resize(d.n_dofs);
  for (int i = 0; i < d.n_dofs; ++i) {
    if (!d.dirichlet[i]) {
      g.bie_weights[i] = {{i, 1.0}};
      continue;
    }
    const int c = d.dof_cells[i].front();
    int corner = -1;
    for (int k = 0; k < 4; ++k)
      if (m.cells[c][k] == d.dof_node[i]) corner = k;
    static const double cu[4] = {0, 1, 1, 0}, cv[4] = {0, 0, 1, 1};
    const double u = (1 - kFirstKindShift) * cu[corner] + kFirstKindShift * 0.5;
    const double v = (1 - kFirstKindShift) * cv[corner] + kFirstKindShift * 0.5;
    g.bie_cell[i] = c;
    g.bie_u[i] = u;
    g.bie_v[i] = v;
    g.bie_point[i] = bilinear_eval(g.corners[c], u, v).point;
    const auto sh = quad_shape(u, v);
    for (int k = 0; k < 4; ++k)
      for (const auto& [dof, w] : d.cell_scatter[c][k])
        g.bie_weights[i].push_back({dof, sh[k] * w});
  }
  return g;
}

namespace {

// Quadrature data of one cell for a fixed rule.
struct CellQuad {
  std::vector<Vec3> point, normal;
  std::vector<double> jw;  // jacobian * weight
  std::vector<std::array<double, 4>> shape;
};

CellQuad eval_rule(const std::array<Vec3, 4>& corners,
                   const std::vector<QuadPoint>& rule) {
  CellQuad q;
  q.point.reserve(rule.size());
  for (const auto& p : rule) {
    const CellPoint cp = bilinear_eval(corners, p.u, p.v);
    q.point.push_back(cp.point);
    q.normal.push_back(cp.normal);
    q.jw.push_back(cp.jacobian * p.w);
    q.shape.push_back(quad_shape(p.u, p.v));
  }
  return q;
}

// Reference coordinates of the boundary point of the cell closest to x,
// and its distance. Cell edges are straight under the bilinear map, so an
// edge-by-edge segment scan suffices.
void nearest_edge_point(const std::array<Vec3, 4>& c, const Vec3& x,
                        double& u0, double& v0, double& dist) {
  u0 = v0 = 0;
  dist = std::numeric_limits<double>::max();
  for (int e = 0; e < 4; ++e) {
    const Vec3& a = c[e];
    const Vec3& b = c[(e + 1) % 4];
    const Vec3 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 <= 0) continue;
    const double t = std::clamp((x - a).dot(ab) / len2, 0.0, 1.0);
    const double de = (x - a - t * ab).norm();
    if (de >= dist) continue;
    dist = de;
    switch (e) {
      case 0: u0 = t; v0 = 0; break;
      case 1: u0 = 1; v0 = t; break;
      case 2: u0 = 1 - t; v0 = 1; break;
      default: u0 = 0; v0 = 1 - t; break;
    }
  }
}

// Quadrature of one cell as seen from collocation row `row`: the host cell
// of a shifted point and any cell the point lies on get a fan concentrated
// at the singular location, grazed cells a rule graded towards the nearest
// boundary point; other nearby cells use the fine tensor rule, far cells
// the regular one. `local` provides storage when a per-row rule is built.
const CellQuad& pick_rule(const BemGeometry& g, int row, int c,
                          CellQuad& local, CellQuad& regular, char& have_reg,
                          CellQuad& fine, char& have_fine) {
  const auto& corners = g.corners[c];
  const double diag = g.diagonal[c];
  const Vec3& x = g.bie_point[row];
  if (g.bie_cell[row] == c) {
    local = eval_rule(corners, quad_rule_singular(g.bie_u[row], g.bie_v[row]));
    return local;
  }
  double u0, v0, dist;
  nearest_edge_point(corners, x, u0, v0, dist);
  if (dist < 1e-9 * diag) {
    local = eval_rule(corners, quad_rule_singular(u0, v0));
    return local;
  }
  if (dist < 0.8 * diag) {
    local = eval_rule(corners, quad_rule_near(u0, v0, dist / diag));
    return local;
  }
  const Vec3 center = 0.25 * (corners[0] + corners[1] + corners[2] + corners[3]);
  if ((x - center).norm() < 2.0 * diag) {
    if (!have_fine) {
      fine = eval_rule(corners, quad_rule_fine());
      have_fine = true;
    }
    return fine;
  }
  if (!have_reg) {
    regular = eval_rule(corners, quad_rule_regular());
    have_reg = true;
  }
  return regular;
}

} // namespace

void assemble_influence(const DofLayout& d, const BemGeometry& g,
                        const std::vector<int>& rows,
                        const std::vector<int>& cells, double sign, Mat& N,
                        Mat& D) {
  const double inv4pi = 1.0 / (4.0 * M_PI);
  std::vector<CellQuad> regular(cells.size()), fine(cells.size());
  std::vector<char> have_reg(cells.size(), 0), have_fine(cells.size(), 0);

  for (int row : rows) {
    const Vec3& x = g.bie_point[row];
    for (size_t ci = 0; ci < cells.size(); ++ci) {
      const int c = cells[ci];
      const double diag = g.diagonal[c];

      CellQuad local;
      const CellQuad* q = &pick_rule(g, row, c, local, regular[ci],
                                     have_reg[ci], fine[ci], have_fine[ci]);

      const double guard = 1e-12 * diag;
      for (size_t k = 0; k < q->point.size(); ++k) {
        const Vec3 r = q->point[k] - x;
        const double rn = r.norm();
        if (rn < guard) continue;
        const double green = inv4pi / rn;
        const double dgreen = -r.dot(q->normal[k]) * inv4pi / (rn * rn * rn);
        const double wN = sign * q->jw[k] * dgreen;
        const double wD = sign * q->jw[k] * green;
        for (int corner = 0; corner < 4; ++corner) {
          const double s = q->shape[k][corner];
          if (s == 0) continue;
          for (const auto& [dof, w] : d.cell_scatter[c][corner]) {
            N(row, dof) += wN * s * w;
            D(row, dof) += wD * s * w;
          }
        }
      }
    }
  }
}

void accumulate_bie(const DofLayout& d, const BemGeometry& g,
                    const std::vector<int>& rows, const std::vector<int>& cells,
                    const Vec& phi, const Vec& gamma, Vec& out) {
  const double inv4pi = 1.0 / (4.0 * M_PI);
  std::vector<CellQuad> regular(cells.size()), fine(cells.size());
  std::vector<char> have_reg(cells.size(), 0), have_fine(cells.size(), 0);
  // Corner values of the interpolants, per requested cell.
  std::vector<std::array<double, 4>> phic(cells.size()), gamc(cells.size());
  for (size_t ci = 0; ci < cells.size(); ++ci)
    for (int k = 0; k < 4; ++k) {
      double p = 0, gm = 0;
      for (const auto& [dof, w] : d.cell_scatter[cells[ci]][k]) {
        p += w * phi[dof];
        gm += w * gamma[dof];
      }
      phic[ci][k] = p;
      gamc[ci][k] = gm;
    }

  for (int row : rows) {
    const Vec3& x = g.bie_point[row];
    double phi_r = 0;
    for (const auto& [dof, w] : g.bie_weights[row]) phi_r += w * phi[dof];
    double acc = 0;
    for (size_t ci = 0; ci < cells.size(); ++ci) {
      const int c = cells[ci];
      const double diag = g.diagonal[c];
      CellQuad local;
      const CellQuad* q = &pick_rule(g, row, c, local, regular[ci],
                                     have_reg[ci], fine[ci], have_fine[ci]);
      const double guard = 1e-12 * diag;
      for (size_t k = 0; k < q->point.size(); ++k) {
        const Vec3 r = q->point[k] - x;
        const double rn = r.norm();
        if (rn < guard) continue;
        double phi_h = 0, gam_h = 0;
        for (int corner = 0; corner < 4; ++corner) {
          phi_h += q->shape[k][corner] * phic[ci][corner];
          gam_h += q->shape[k][corner] * gamc[ci][corner];
        }
        const double green = inv4pi / rn;
        const double dgreen = -r.dot(q->normal[k]) * inv4pi / (rn * rn * rn);
        acc += q->jw[k] * (dgreen * (phi_h - phi_r) - green * gam_h);
      }
    }
    out[row] += acc;
  }
}

Vec bie_residual(const Mat& N, const Mat& D, const BemGeometry& g,
                 const Vec& phi, const Vec& gamma) {
  Vec phir(phi.size());
  for (int i = 0; i < phi.size(); ++i) {
    double v = 0;
    for (const auto& [dof, w] : g.bie_weights[i]) v += w * phi[dof];
    phir[i] = v;
  }
  return N * phi - (N.rowwise().sum()).cwiseProduct(phir) - D * gamma;
}

Mat bie_phi_matrix(const Mat& N, const BemGeometry& g) {
  Mat A = N;
  const Vec rowsum = N.rowwise().sum();
  for (int i = 0; i < A.rows(); ++i)
    for (const auto& [dof, w] : g.bie_weights[i]) A(i, dof) -= rowsum[i] * w;
  return A;
}

Mat assemble_mass(const DofLayout& d, const BemGeometry& g) {
  Mat M = Mat::Zero(d.n_dofs, d.n_dofs);
  for (int c = 0; c < d.mesh->n_cells(); ++c) {
    const CellQuad q = eval_rule(g.corners[c], quad_rule_regular());
    for (size_t k = 0; k < q.point.size(); ++k)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          const double s = q.jw[k] * q.shape[k][a] * q.shape[k][b];
          for (const auto& [di, wi] : d.cell_scatter[c][a])
            for (const auto& [dj, wj] : d.cell_scatter[c][b])
              M(di, dj) += s * wi * wj;
        }
  }
  return M;
}

Vec project_boundary_flux(
    const DofLayout& d, const BemGeometry& g,
    const std::function<double(const Vec3&, const Vec3&)>& g_fn) {
  Vec b = Vec::Zero(d.n_dofs);
  for (int c = 0; c < d.mesh->n_cells(); ++c) {
    const CellQuad q = eval_rule(g.corners[c], quad_rule_regular());
    for (size_t k = 0; k < q.point.size(); ++k) {
      const double val = q.jw[k] * g_fn(q.point[k], q.normal[k]);
      for (int a = 0; a < 4; ++a)
        for (const auto& [di, wi] : d.cell_scatter[c][a])
          b[di] += val * q.shape[k][a] * wi;
    }
  }
  return b;
}

std::vector<LaplaceSolution> solve_laplace_many(const DofLayout& d,
                                                const std::vector<LaplaceBc>& bcs) {
  const int n = d.n_dofs;
  const BemGeometry g = bem_geometry(d, reference_elevation(d));
  std::vector<int> all_rows(n), all_cells(d.mesh->n_cells());
  for (int i = 0; i < n; ++i) all_rows[i] = i;
  for (int c = 0; c < d.mesh->n_cells(); ++c) all_cells[c] = c;

  Mat N = Mat::Zero(n, n), D = Mat::Zero(n, n);
  assemble_influence(d, g, all_rows, all_cells, 1.0, N, D);
  const Mat Aphi = bie_phi_matrix(N, g);
  const Mat M = assemble_mass(d, g);

  Mat A = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    switch (d.phi_row[i]) {
      case PhiRow::Dirichlet:
        A(i, i) = 1;
        break;
      case PhiRow::Continuity:
        A(i, i) = 1;
        A(i, d.continuity_with[i]) = -1;
        break;
      case PhiRow::Integral:
        A.block(i, 0, 1, n) = Aphi.row(i);
        A.block(i, n, 1, n) = -D.row(i);
        break;
    }
    if (d.gamma_row[i] == GammaRow::Integral) {
      A.block(n + i, 0, 1, n) = Aphi.row(i);
      A.block(n + i, n, 1, n) = -D.row(i);
    } else {
      A.block(n + i, n, 1, n) = M.row(i);
    }
  }

  Eigen::FullPivLU<Mat> lu(A);
  lu.setThreshold(1e-10);
  const int rank_deficiency = 2 * n - static_cast<int>(lu.rank());

  std::vector<LaplaceSolution> sols;
  for (const auto& bc : bcs) {
    const Vec b = project_boundary_flux(d, g, bc.neumann);
    Vec rhs = Vec::Zero(2 * n);
    for (int i = 0; i < n; ++i) {
      if (d.phi_row[i] == PhiRow::Dirichlet) rhs[i] = bc.dirichlet(g.colloc[i]);
      if (d.gamma_row[i] != GammaRow::Integral) rhs[n + i] = b[i];
    }
    const Vec x = lu.solve(rhs);
    LaplaceSolution sol;
    sol.rank_deficiency = rank_deficiency;
    sol.phi = x.head(n);
    sol.gamma = x.tail(n);
    sols.push_back(std::move(sol));
  }
  return sols;
}

LaplaceSolution solve_laplace(
    const DofLayout& d, const std::function<double(const Vec3&)>& dirichlet,
    const std::function<double(const Vec3&, const Vec3&)>& neumann) {
  return solve_laplace_many(d, {{dirichlet, neumann}}).front();
}

} // namespace ntt
