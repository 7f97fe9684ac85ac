#pragma once

#include "ntt/geometry.hpp"

namespace ntt {

/// Deep/finite-depth wave frequency omega(k) = sqrt(g k tanh(k depth)).
double airy_dispersion(double k, double depth, double gravity = 9.81);

/// Incident flow the solution tends to far from the hull: a uniform stream
/// plus an optional linear wave, both scaled by a smooth start-up ramp.
/// The disturbance potential solved for is the remainder on top of this.
struct AsymptoticFlow {
  double speed = 0.0;       // stream velocity, +x
  double amplitude = 0.0;   // wave amplitude
  double wavenumber = 0.0;
  double depth = 50.0;
  double gravity = 9.81;
  double ramp_time = 0.0;   // 0 disables the ramp (flow fully on)

  double omega() const;

  double ramp(double t) const;
  double ramp_dot(double t) const;

  double potential(const Vec3& x, double t) const;
  Vec3 velocity(const Vec3& x, double t) const;
  double potential_t(const Vec3& x, double t) const;  // fixed-point time derivative

  double elevation(double x, double t) const;
  double elevation_t(double x, double t) const;
};

} // namespace ntt
