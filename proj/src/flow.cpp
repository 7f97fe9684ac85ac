#include "ntt/flow.hpp"

#include <cmath>

namespace ntt {

double airy_dispersion(double k, double depth, double gravity) {
  return std::sqrt(gravity * k * std::tanh(k * depth));
}

double AsymptoticFlow::omega() const {
  return airy_dispersion(wavenumber, depth, gravity);
}

double AsymptoticFlow::ramp(double t) const {
  if (ramp_time <= 0 || t >= ramp_time) return 1.0;
  if (t <= 0) return 0.0;
  const double s = std::sin(M_PI * t / (2 * ramp_time));
  return s * s;
}

double AsymptoticFlow::ramp_dot(double t) const {
  if (ramp_time <= 0 || t >= ramp_time || t <= 0) return 0.0;
  return (M_PI / (2 * ramp_time)) * std::sin(M_PI * t / ramp_time);
}

namespace {

struct WaveFactors {
  double ch, sh;  // cosh(k(z+h))/sinh(kh), sinh(k(z+h))/sinh(kh)
};

WaveFactors factors(double k, double depth, double z) {
  const double sh_kh = std::sinh(k * depth);
  return {std::cosh(k * (z + depth)) / sh_kh, std::sinh(k * (z + depth)) / sh_kh};
}

} // namespace

double AsymptoticFlow::potential(const Vec3& x, double t) const {
  double p = speed * x.x();
  if (amplitude != 0 && wavenumber > 0) {
    const double w = omega();
    const auto f = factors(wavenumber, depth, x.z());
    p += amplitude * (w / wavenumber) * f.ch *
         std::sin(wavenumber * x.x() - w * t);
  }
  return ramp(t) * p;
}

Vec3 AsymptoticFlow::velocity(const Vec3& x, double t) const {
  Vec3 v(speed, 0, 0);
  if (amplitude != 0 && wavenumber > 0) {
    const double w = omega();
    const auto f = factors(wavenumber, depth, x.z());
    const double arg = wavenumber * x.x() - w * t;
    v.x() += amplitude * w * f.ch * std::cos(arg);
    v.z() += amplitude * w * f.sh * std::sin(arg);
  }
  return ramp(t) * v;
}

double AsymptoticFlow::potential_t(const Vec3& x, double t) const {
  double p = speed * x.x();
  double pt = 0;
  if (amplitude != 0 && wavenumber > 0) {
    const double w = omega();
    const auto f = factors(wavenumber, depth, x.z());
    const double arg = wavenumber * x.x() - w * t;
    p += amplitude * (w / wavenumber) * f.ch * std::sin(arg);
    pt = -amplitude * (w * w / wavenumber) * f.ch * std::cos(arg);
  }
  return ramp(t) * pt + ramp_dot(t) * p;
}

double AsymptoticFlow::elevation(double x, double t) const {
  if (amplitude == 0 || wavenumber <= 0) return 0.0;
  return ramp(t) * amplitude * std::cos(wavenumber * x - omega() * t);
}

double AsymptoticFlow::elevation_t(double x, double t) const {
  if (amplitude == 0 || wavenumber <= 0) return 0.0;
  const double w = omega();
  const double arg = wavenumber * x - w * t;
  return ramp(t) * amplitude * w * std::sin(arg) +
         ramp_dot(t) * amplitude * std::cos(arg);
}

} // namespace ntt
