#include "ntt/geometry.hpp"

#include <stdexcept>

namespace ntt {

GeometryDescriptor GeometryDescriptor::none() { return {}; }

GeometryDescriptor GeometryDescriptor::plane(const Vec3& point, const Vec3& normal) {
  GeometryDescriptor g;
  g.kind = Kind::Plane;
  g.point = point;
  g.normal = normal.normalized();
  return g;
}

GeometryDescriptor GeometryDescriptor::spheroid(const Vec3& center, const Vec3& semi_axes) {
  if (semi_axes.minCoeff() <= 0.0)
    throw std::invalid_argument("spheroid semi-axes must be positive");
  GeometryDescriptor g;
  g.kind = Kind::Spheroid;
  g.point = center;
  g.semi_axes = semi_axes;
  return g;
}

Vec3 GeometryDescriptor::project(const Vec3& p) const {
  switch (kind) {
    case Kind::None:
      return p;
    case Kind::Plane:
      return p - normal.dot(p - point) * normal;
    case Kind::Spheroid: {
      const Vec3 q = (p - point).cwiseQuotient(semi_axes);
      const double r = q.norm();
      if (r < 1e-14)  // center: pick the +z apex
        return point + Vec3(0, 0, semi_axes.z());
      return point + (p - point) / r;
    }
  }
  return p;
}

double GeometryDescriptor::implicit(const Vec3& p) const {
  switch (kind) {
    case Kind::None:
      return 0.0;
    case Kind::Plane:
      return normal.dot(p - point);
    case Kind::Spheroid:
      return (p - point).cwiseQuotient(semi_axes).squaredNorm() - 1.0;
  }
  return 0.0;
}

Vec3 GeometryDescriptor::surface_normal(const Vec3& p) const {
  switch (kind) {
    case Kind::None:
      return Vec3::UnitZ();
    case Kind::Plane:
      return normal;
    case Kind::Spheroid: {
      const Vec3 g = 2.0 * (p - point).cwiseQuotient(semi_axes.cwiseProduct(semi_axes));
      return g.normalized();
    }
  }
  return Vec3::UnitZ();
}

} // namespace ntt
