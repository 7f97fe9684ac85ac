#pragma once

#include <stdexcept>
#include <string>

#include "ntt/flow.hpp"
#include "ntt/mesh_builders.hpp"
#include "ntt/system.hpp"

namespace ntt {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RunMode { Steady, Unsteady, Ramped };

/// Full description of one tank run. Defaults reproduce the submerged
/// spheroid campaign: L = 10 m hull at 2.5 m submergence in a 300 x 100 x
/// 50 m tank.
struct Scenario {
  // [hull]
  double length = 10.0;
  double radius = 1.0;
  double submergence = 2.5;

  // [flow] exactly one of speed/froude may be set explicitly.
  double speed = -1.0;
  double froude = -1.0;
  double amplitude = 0.0;
  double wavelength = 0.0;  // alternative key: wavenumber
  double depth = 50.0;
  double gravity = 9.81;

  // [domain]
  double width = 100.0;
  double upstream = 150.0;
  double downstream = 150.0;
  int nx = 12, ny = 6, nz = 4;
  int curvature_cycles = 7;
  double curvature_angle = 0.2618;  // hull refinement threshold, radians
  int fs_cycles = 3;
  double fs_focus_radius = 40.0;
  double max_aspect = 3.5;

  // [beach]
  BeachParams beach;

  // [solver]
  double tol = 1e-5;
  double rho = 1000.0;
  double supg_c = 0.5;
  double fd_eps = 1e-6;
  double dt = 0.1;
  double min_dt = 1e-4;
  double max_dt = 0.5;
  int bdf_order = 2;

  // [refine]
  double fraction = 0.04;
  int cycles = 3;

  // [run]
  RunMode mode = RunMode::Steady;
  double t_ramp = 10.0;
  double t_end = 40.0;
  std::string output_dir = "out";
  int output_every = 0;  // VTK dump period in steps, 0 = off

  double resolved_speed() const;      // from speed or froude
  double resolved_wavenumber() const; // 0 when no wave
};

/// Line-oriented "key = value" file with [section] headers; '#' comments.
/// Unknown keys and malformed lines are rejected with their line number.
Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario_file(const std::string& path);

DomainParams domain_params(const Scenario& sc);
AsymptoticFlow make_flow(const Scenario& sc, bool ramped);
SystemParams system_params(const Scenario& sc, bool unsteady);

} // namespace ntt
