#pragma once

#include <vector>

#include <Eigen/Core>

#include "bi/geometry.hpp"

namespace bi {

using Mat3 = Eigen::Matrix3d;

inline constexpr double kDefaultRatioB = 1.0 / 2.0;
inline constexpr double kDefaultRatioC = 1.0 / 3.0;

// Oriented ellipsoid spanning the wrist and the predicted target. rotation's
// columns are the local x (major, wrist -> target), y and z axes in world
// coordinates.
struct VirtualEllipsoid {
  Vec3 center = Vec3::Zero();
  double a = 0.0;
  double b = 0.0;
  double c_axis = 0.0;
  Mat3 rotation = Mat3::Identity();

  Vec3 to_local(const Vec3& p) const { return rotation.transpose() * (p - center); }

  // (x'/a)^2 + (y'/b)^2 + (z'/c)^2 of p in the ellipsoid frame.
  double quadratic_form(const Vec3& p) const;
};

// Reference directions for completing the ellipsoid frame. The minor axes
// are built from `up`; when the major axis is within `fallback_deg` of it,
// `fallback` is used instead.
struct FrameReference {
  Vec3 up = Vec3::UnitZ();
  Vec3 fallback = Vec3::UnitX();
  double fallback_deg = 1.0;
};

VirtualEllipsoid build_ellipsoid(const Vec3& wrist, const Vec3& target, double r_b = kDefaultRatioB,
                                 double r_c = kDefaultRatioC, const FrameReference& frame = {});

bool contains(const VirtualEllipsoid& e, const Vec3& p);

// Grows every semi-axis by `margin` meters.
VirtualEllipsoid inflate(const VirtualEllipsoid& e, double margin);

struct Sphere {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
};
using SphereSet = std::vector<Sphere>;

struct SphereParams {
  double radius_ratio = 1.0;   // sphere radius as a multiple of b
  double spacing_ratio = 0.5;  // max center spacing as a multiple of b
};

// Spheres of radius b strung along the major axis, no further apart than b/2.
SphereSet to_spheres(const VirtualEllipsoid& e, const SphereParams& params = {});

bool spheres_contain(const SphereSet& spheres, const Vec3& p);

}  // namespace bi
