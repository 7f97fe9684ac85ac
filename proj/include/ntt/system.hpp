#pragma once

#include "ntt/fsops.hpp"

namespace ntt {

struct SystemParams {
  FsParams fs;
  bool unsteady = true;  // activates the beach pressure
  double fd_eps = 1e-6;  // relative step of the differenced Jacobian parts
};

/// The discrete towing-tank problem as a DAE residual F(ydot, y, t) = 0 with
/// y = (phi, gamma, z) stacked block-wise over the dofs. Per dof the rows are
///   potential row:  prescribed value, integral equation, or continuity
///                   with the node representative;
///   derivative row: integral equation (prescribed-potential dofs) or the
///                   weak non-penetration condition;
///   elevation row:  weak dynamic condition on the free surface, z pinned to
///                   the mesh elevation elsewhere.
/// The steady problem is the same residual evaluated with ydot = 0.
class TowingTankSystem {
 public:
  TowingTankSystem(const DofLayout& dofs, const AsymptoticFlow& flow,
                   const SystemParams& params);

  int n() const { return d_->n_dofs; }
  int size() const { return 3 * d_->n_dofs; }

  const DofLayout& dofs() const { return *d_; }
  const AsymptoticFlow& flow() const { return *flow_; }
  SystemParams& params() { return p_; }
  const SystemParams& params() const { return p_; }

  /// Undisturbed state: zero potential, mesh elevations. Consistent with
  /// ydot = 0 at t = 0 when the flow is ramped.
  Vec reference_state() const;

  Vec residual(const Vec& ydot, const Vec& y, double t) const;

  /// J = dF/dy + c dF/dydot. Linear blocks are exact; the nonlinear parts
  /// are central differences confined to the cells each column influences.
  Mat jacobian(const Vec& ydot, const Vec& y, double t, double c) const;

  /// Dense central-difference reference Jacobian (small problems, tests).
  Mat jacobian_fd(const Vec& ydot, const Vec& y, double t, double c) const;

 private:
  BemGeometry geometry(const Vec& z) const;
  void move_column(BemGeometry& g, const Vec& z, int k) const;

  const DofLayout* d_;
  const AsymptoticFlow* flow_;
  SystemParams p_;
  Vec zref_;
  std::vector<int> all_cells_, host_rows_;
  std::vector<char> is_host_;
};

} // namespace ntt
