#include "bi/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bi/error.hpp"

namespace bi {

double VirtualEllipsoid::quadratic_form(const Vec3& p) const {
  const Vec3 local = to_local(p);
  const double x = local.x() / a;
  const double y = local.y() / b;
  const double z = local.z() / c_axis;
  return x * x + y * y + z * z;
}

VirtualEllipsoid build_ellipsoid(const Vec3& wrist, const Vec3& target, double r_b, double r_c,
                                 const FrameReference& frame) {
  if (!(r_b > 0.0 && r_b <= 1.0) || !(r_c > 0.0 && r_c <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "ellipsoid ratios must lie in (0, 1]");
  }
  const Vec3 reach = target - wrist;
  const double length = reach.norm();
  if (!(length > kDegenerateEps)) {
    throw Error(ErrorCode::DegenerateObstacle, "wrist and target coincide");
  }

  VirtualEllipsoid e;
  e.center = 0.5 * (wrist + target);
  e.a = 0.5 * length;
  e.b = r_b * e.a;
  e.c_axis = r_c * e.b;

  const Vec3 x_axis = reach / length;
  const Vec3 up = frame.up.normalized();
  const bool near_up = std::abs(x_axis.dot(up)) > std::cos(deg2rad(frame.fallback_deg));
  const Vec3 reference = near_up ? frame.fallback.normalized() : up;
  const Vec3 y_axis = x_axis.cross(reference).normalized();
  const Vec3 z_axis = x_axis.cross(y_axis);
  e.rotation.col(0) = x_axis;
  e.rotation.col(1) = y_axis;
  e.rotation.col(2) = z_axis;
  return e;
}

bool contains(const VirtualEllipsoid& e, const Vec3& p) { return e.quadratic_form(p) <= 1.0; }

VirtualEllipsoid inflate(const VirtualEllipsoid& e, double margin) {
  if (!(margin >= 0.0)) throw Error(ErrorCode::InvalidConfig, "margin must be >= 0");
  VirtualEllipsoid grown = e;
  grown.a += margin;
  grown.b += margin;
  grown.c_axis += margin;
  return grown;
}

SphereSet to_spheres(const VirtualEllipsoid& e, const SphereParams& params) {
  if (!(params.radius_ratio > 0.0) || !(params.spacing_ratio > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "sphere radius and spacing ratios must be positive");
  }
  if (e.a <= e.b) return {Sphere{e.center, e.a}};

  const double radius = params.radius_ratio * e.b;
  const double spacing = params.spacing_ratio * e.b;
  const double half_span = e.a - std::min(radius, e.a);
  // Evenly spaced centers, never further apart than `spacing`.
  const auto intervals = static_cast<int>(std::ceil(2.0 * half_span / spacing - 1e-9));
  const Vec3 axis = e.rotation.col(0);

  SphereSet spheres;
  if (intervals <= 0) {
    spheres.push_back({e.center, radius});
    return spheres;
  }
  spheres.reserve(static_cast<std::size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) {
    const double offset = -half_span + 2.0 * half_span * static_cast<double>(k) / static_cast<double>(intervals);
    spheres.push_back({e.center + offset * axis, radius});
  }
  return spheres;
}

bool spheres_contain(const SphereSet& spheres, const Vec3& p) {
  return std::any_of(spheres.begin(), spheres.end(),
                     [&](const Sphere& s) { return (p - s.center).squaredNorm() <= s.radius * s.radius; });
}

}  // namespace bi
