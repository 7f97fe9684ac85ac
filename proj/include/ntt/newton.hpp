#pragma once

#include <functional>

#include "ntt/bem.hpp"

namespace ntt {

struct NewtonOptions {
  double tol_rel = 1e-5;
  double tol_abs = 1e-12;
  int max_iters = 30;
  int max_backtracks = 10;
  bool verbose = false;
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  int jacobians = 0;
  double residual_norm = 0;
  std::vector<double> history;  // residual norm per iteration, starting at x0
};

/// Damped Newton with dense LU and backtracking line search on ||F||.
/// The factorization is reused across iterations (chord method) and only
/// refreshed when the residual contraction per step degrades.
/// Converged when ||F|| <= max(tol_abs, tol_rel * ||F(x0)||).
NewtonReport newton_solve(const std::function<Vec(const Vec&)>& residual,
                          const std::function<Mat(const Vec&)>& jacobian,
                          Vec& x, const NewtonOptions& opt = {});

} // namespace ntt
