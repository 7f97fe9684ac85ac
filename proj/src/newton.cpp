#include "ntt/newton.hpp"

#include <cstdio>

namespace ntt {

NewtonReport newton_solve(const std::function<Vec(const Vec&)>& residual,
                          const std::function<Mat(const Vec&)>& jacobian,
                          Vec& x, const NewtonOptions& opt) {
  NewtonReport rep;
  Vec F = residual(x);
  double norm = F.norm();
  rep.history.push_back(norm);
  const double target = std::max(opt.tol_abs, opt.tol_rel * norm);

  Eigen::PartialPivLU<Mat> lu;
  bool have_lu = false;
  bool lu_current = false;  // factored at the present iterate
  int steps_on_lu = 0;
  for (int it = 0; it < opt.max_iters; ++it) {
    if (norm <= target) {
      rep.converged = true;
      break;
    }
    if (!have_lu) {
      lu.compute(jacobian(x));
      ++rep.jacobians;
      have_lu = true;
      lu_current = true;
      steps_on_lu = 0;
    }
    const Vec step = lu.solve(F);

    double alpha = 1.0;
    Vec x_new;
    Vec F_new;
    double norm_new = norm;
    bool accepted = false;
    for (int bt = 0; bt <= opt.max_backtracks; ++bt) {
      x_new = x - alpha * step;
      F_new = residual(x_new);
      norm_new = F_new.norm();
      if (norm_new < norm * (1.0 - 1e-4 * alpha) || norm_new <= target) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    ++rep.iterations;
    if (!accepted) {
      // A stale factorization gets one retry from a fresh one before the
      // smallest trial is taken (if it is no worse) or the solve stops.
      if (!lu_current) {
        have_lu = false;
        continue;
      }
      if (norm_new >= norm) break;
    }
    const bool slow = norm_new > 0.75 * norm;
    x = x_new;
    F = F_new;
    norm = norm_new;
    rep.history.push_back(norm);
    lu_current = false;
    ++steps_on_lu;
    // Refresh at the accepted iterate when contraction degrades or the
    // factorization has been ridden for a while.
    if (slow || steps_on_lu >= 5) have_lu = false;
    if (opt.verbose)
      std::printf("newton it=%d |F|=%.6e alpha=%.3f\n", it + 1, norm, alpha);
  }
  rep.converged = rep.converged || norm <= target;
  rep.residual_norm = norm;
  return rep;
}

} // namespace ntt
