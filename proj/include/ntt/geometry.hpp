#pragma once

#include <Eigen/Dense>

namespace ntt {

using Vec3 = Eigen::Vector3d;

/// Analytic surface a mesh patch is bound to. New nodes created during
/// refinement are projected back onto it.
struct GeometryDescriptor {
  enum class Kind { None, Plane, Spheroid };

  Kind kind = Kind::None;
  Vec3 point = Vec3::Zero();     // plane point / spheroid center
  Vec3 normal = Vec3::UnitZ();   // plane unit normal
  Vec3 semi_axes = Vec3::Ones(); // spheroid (a,b,c)

  static GeometryDescriptor none();
  static GeometryDescriptor plane(const Vec3& point, const Vec3& normal);
  static GeometryDescriptor spheroid(const Vec3& center, const Vec3& semi_axes);

  // Projection is idempotent; for the spheroid it is the closed-form radial
  // scaling about the center, for planes the orthogonal projection.
  Vec3 project(const Vec3& p) const;

  // Signed implicit function (zero on the surface).
  double implicit(const Vec3& p) const;

  // Outward (away from center / along plane normal) unit normal at a surface point.
  Vec3 surface_normal(const Vec3& p) const;
};

} // namespace ntt
