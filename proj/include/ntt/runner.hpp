#pragma once

#include <cstdio>
#include <memory>

#include "ntt/adapt.hpp"
#include "ntt/bdf.hpp"
#include "ntt/forces.hpp"
#include "ntt/scenario.hpp"

namespace ntt {

struct SolveStats {
  bool converged = false;
  int iterations = 0;
  int jacobians = 0;
  double residual = 0;
};

/// Stationary problem: the transient residual with ydot = 0 and the beach
/// inactive. Rejects scenarios with wave forcing.
SolveStats steady_solve(TowingTankSystem& sys, Vec& y, double tol,
                        bool verbose = false);

/// Restart after a state change with frozen positions: solves for the
/// free-surface time-derivative entries (potential and elevation rates)
/// that appear in the residual, holding y fixed.
SolveStats reinit_velocity(const TowingTankSystem& sys, const Vec& y, Vec& ydot,
                           double t, double tol);

/// Restart by adjusting the state itself with ydot held fixed (preferred
/// after mesh refinement).
SolveStats reinit_position(const TowingTankSystem& sys, Vec& y, const Vec& ydot,
                           double t, double tol);

struct CycleRow {
  int cycle = 0;
  int nodes = 0;      // geometric mesh nodes
  int dofs = 0;
  int iterations = 0;
  int jacobians = 0;
  double drag = 0, lift = 0;
  double seconds = 0;
};

struct ForceSample {
  double t = 0, R = 0, L = 0, Rstar = 0, Lstar = 0;
};

/// One scenario bound to a concrete mesh/dof/system generation.
class TowingTank {
 public:
  explicit TowingTank(const Scenario& sc);

  const Scenario& scenario() const { return sc_; }
  const SurfaceMesh& mesh() const { return *mesh_; }
  const DofLayout& dofs() const { return *dofs_; }
  TowingTankSystem& system() { return *sys_; }
  const AsymptoticFlow& current_flow() const { return flow_; }

  Vec& state() { return y_; }
  Vec& state_dot() { return ydot_; }

  /// Steady adaptive campaign: solve, then `cycles` rounds of mark/refine/
  /// transfer/re-solve. Row 0 is the initial grid.
  std::vector<CycleRow> steady_cycles(int cycles, std::FILE* log = nullptr);

  /// Transient run from the current state to t_end; samples forces each
  /// accepted step. Throws on integrator failure.
  std::vector<ForceSample> transient(std::FILE* log = nullptr);

  ForceSample sample_forces(double t) const;

  void write_vtk_snapshot(const std::string& path) const;

 private:
  void rebuild(std::unique_ptr<SurfaceMesh> mesh, bool transfer);

  Scenario sc_;
  AsymptoticFlow flow_;
  std::unique_ptr<SurfaceMesh> mesh_;
  std::unique_ptr<DofLayout> dofs_;
  std::unique_ptr<TowingTankSystem> sys_;
  Vec y_, ydot_;
};

void write_history_csv(const std::string& path,
                       const std::vector<ForceSample>& rows);
void write_cycles_csv(const std::string& path, const std::vector<CycleRow>& rows);

} // namespace ntt
