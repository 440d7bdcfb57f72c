#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace bi {

// World frame, meters, z up.
using Vec3 = Eigen::Vector3d;

inline constexpr double kDegenerateEps = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double degrees) { return degrees * kPi / 180.0; }
constexpr double rad2deg(double radians) { return radians * 180.0 / kPi; }

enum class Affordance { TopGrasp, SideGrasp, Both };

std::string_view to_string(Affordance affordance);
Affordance affordance_from_string(std::string_view name);

struct SceneObject {
  std::size_t id = 0;
  std::string name;
  Vec3 position = Vec3::Zero();
  Affordance affordance = Affordance::Both;
};

// The candidate target set. Object ids are dense: objects[i].id == i.
struct Scene {
  std::vector<SceneObject> objects;

  std::size_t size() const { return objects.size(); }
  bool empty() const { return objects.empty(); }
  const SceneObject& operator[](std::size_t i) const { return objects[i]; }

  std::optional<std::size_t> find(std::string_view name) const;

  // Throws SchemaViolation when ids are not 0..n-1 in order or a position is
  // not finite.
  void validate() const;
};

// Three cereal/banana/milk objects on a table row, 12 in (0.3048 m) apart.
Scene default_scene();

// One time-stamped frame of world-frame keypoints. hand_points are the
// wrist, index-finger base and pinky base, in that order.
struct Observation {
  double t = 0.0;
  Vec3 nose = Vec3::Zero();
  Vec3 head_dir = Vec3::UnitX();
  Vec3 wrist = Vec3::Zero();
  std::array<Vec3, 3> hand_points{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
};

// Angle in [0, pi]; throws DegenerateVector if either norm is <= 1e-9.
double angle_between(const Vec3& u, const Vec3& v);

// Angle between the head direction and the nose-to-object vector, per object.
std::vector<double> head_angles(const Observation& obs, const Scene& scene);

// Palm normal from the three hand points, flipped into the upper hemisphere.
Vec3 hand_normal(const Observation& obs);

// Angle between the palm normal and world up, in [0, pi/2].
double hand_orientation_angle(const Observation& obs);

// Two-frame wrist finite difference.
Vec3 hand_velocity(const Observation& prev, const Observation& cur);

// Angle between the hand velocity and the wrist-to-object vector, per object.
std::vector<double> motion_angles(const Vec3& velocity, const Vec3& wrist, const Scene& scene);

// Exponential moving average over two-frame wrist velocities. alpha = 1
// reproduces plain differencing.
class VelocityFilter {
 public:
  explicit VelocityFilter(double alpha = 0.5);

  // Returns nullopt on the first frame; otherwise the smoothed velocity.
  std::optional<Vec3> push(const Observation& obs);
  void reset();

  double alpha() const { return alpha_; }

 private:
  double alpha_;
  std::optional<Observation> prev_;
  std::optional<Vec3> smoothed_;
};

}  // namespace bi
