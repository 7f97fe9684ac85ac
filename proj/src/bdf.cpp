#include "ntt/bdf.hpp"

#include <cstdio>

namespace ntt {

BdfIntegrator::BdfIntegrator(DaeFunctions f, BdfOptions opt)
    : f_(std::move(f)), opt_(opt) {}

void BdfIntegrator::initialize(const Vec& y0, const Vec& ydot0, double t0) {
  y_ = y0;
  ydot_ = ydot0;
  t_ = t0;
  dt_ = opt_.dt;
  dt_prev_ = 0;
  have_prev_ = false;
  have_lu_ = false;
  total_iterations = total_jacobians = 0;
}

bool BdfIntegrator::step() {
  while (dt_ >= opt_.min_dt) {
    const double h = dt_;
    const double t_new = t_ + h;
    const bool second_order = opt_.order >= 2 && have_prev_;

    // ydot_{n+1} = c y_{n+1} + rest.
    double c;
    Vec rest;
    if (!second_order) {
      c = 1.0 / h;
      rest = -y_ / h;
    } else {
      const double w = h / dt_prev_;
      c = (1 + 2 * w) / ((1 + w) * h);
      rest = -((1 + w) / h) * y_ + (w * w / ((1 + w) * h)) * y_prev_;
    }

    Vec y = y_ + h * ydot_;  // extrapolation predictor
    Vec ydot = c * y + rest;
    Vec F = f_.residual(ydot, y, t_new);
    double norm = F.norm();
    const double target = std::max(opt_.tol_abs, opt_.tol_rel * std::max(norm, 1.0));

    if (have_lu_ && std::abs(c / c_used_ - 1.0) > opt_.c_drift) have_lu_ = false;

    int iters = 0, jacs = 0;
    bool converged = norm <= target;
    bool refreshed_this_step = !have_lu_;
    while (!converged && iters < opt_.max_newton) {
      if (!have_lu_) {
        lu_ = Eigen::PartialPivLU<Mat>(f_.jacobian(ydot, y, t_new, c));
        c_used_ = c;
        have_lu_ = true;
        ++jacs;
      }
      y -= lu_.solve(F);
      ydot = c * y + rest;
      F = f_.residual(ydot, y, t_new);
      const double norm_new = F.norm();
      ++iters;
      if (opt_.verbose)
        std::printf("bdf t=%.4f it=%d |F|=%.6e\n", t_new, iters, norm_new);
      if (norm_new <= target) {
        converged = true;
        break;
      }
      const bool stalling = norm_new > 0.5 * norm || iters >= opt_.stale_iters;
      norm = norm_new;
      if (stalling && !refreshed_this_step) {
        have_lu_ = false;  // retry with a fresh factorization
        refreshed_this_step = true;
      }
    }

    total_iterations += iters;
    total_jacobians += jacs;
    if (!converged) {
      dt_ *= 0.5;
      have_lu_ = false;
      continue;
    }

    y_prev_ = y_;
    y_ = y;
    ydot_ = ydot;
    dt_prev_ = h;
    t_ = t_new;
    have_prev_ = true;
    stats_ = {t_new, h, second_order ? 2 : 1, iters, jacs};
    if (iters <= opt_.easy_iters && dt_ < opt_.max_dt)
      dt_ = std::min(2 * dt_, opt_.max_dt);
    return true;
  }
  return false;
}

} // namespace ntt
