#pragma once

#include <functional>

#include "ntt/newton.hpp"

namespace ntt {

/// Implicit DAE F(ydot, y, t) = 0 presented as callables, so both the tank
/// system and small scalar probes integrate through the same code.
struct DaeFunctions {
  int size = 0;
  std::function<Vec(const Vec&, const Vec&, double)> residual;
  std::function<Mat(const Vec&, const Vec&, double, double)> jacobian;
};

struct BdfOptions {
  int order = 2;  // 1 or 2; the first step always uses order 1
  double dt = 0.1;
  double min_dt = 1e-6;
  double max_dt = 1.0;
  int max_newton = 12;
  double tol_rel = 1e-5;
  double tol_abs = 1e-12;
  // Factorization reuse: refresh when the leading coefficient drifted by
  // more than this fraction, or when an iteration budget is exceeded.
  double c_drift = 0.2;
  int easy_iters = 2;    // grow dt after steps converging this fast
  int stale_iters = 4;   // refresh the Jacobian when slower than this
  bool verbose = false;
};

struct StepStats {
  double t = 0, dt = 0;
  int order = 1;
  int iterations = 0;
  int jacobians = 0;
};

/// Variable-step BDF1/BDF2 with a chord Newton corrector: the LU-factored
/// Jacobian is kept across steps and refreshed only when convergence
/// degrades or the step size drifts.
class BdfIntegrator {
 public:
  BdfIntegrator(DaeFunctions f, BdfOptions opt);

  void initialize(const Vec& y0, const Vec& ydot0, double t0);

  /// Advances one accepted step (possibly after internal halvings).
  /// Returns false when no step below min_dt converges.
  bool step();

  double t() const { return t_; }
  const Vec& y() const { return y_; }
  const Vec& ydot() const { return ydot_; }
  const StepStats& last_stats() const { return stats_; }

  int total_iterations = 0;
  int total_jacobians = 0;

 private:
  DaeFunctions f_;
  BdfOptions opt_;
  double t_ = 0, dt_ = 0, dt_prev_ = 0;
  Vec y_, y_prev_, ydot_;
  bool have_prev_ = false;
  StepStats stats_;

  Eigen::PartialPivLU<Mat> lu_;
  bool have_lu_ = false;
  double c_used_ = 0;
};

} // namespace ntt
