#include "bi/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "bi/error.hpp"

namespace bi {

std::string_view to_string(Affordance affordance) {
  switch (affordance) {
    case Affordance::TopGrasp: return "top";
    case Affordance::SideGrasp: return "side";
    case Affordance::Both: return "both";
  }
  return "both";
}

Affordance affordance_from_string(std::string_view name) {
  if (name == "top") return Affordance::TopGrasp;
  if (name == "side") return Affordance::SideGrasp;
  if (name == "both") return Affordance::Both;
  throw Error(ErrorCode::SchemaViolation, "unknown affordance '" + std::string(name) + "'");
}

std::optional<std::size_t> Scene::find(std::string_view name) const {
  for (const auto& object : objects) {
    if (object.name == name) return object.id;
  }
  return std::nullopt;
}

void Scene::validate() const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].id != i) {
      throw Error(ErrorCode::SchemaViolation,
                  "scene object ids must be dense and ordered; expected " + std::to_string(i) +
                      ", got " + std::to_string(objects[i].id));
    }
    if (!objects[i].position.allFinite()) {
      throw Error(ErrorCode::SchemaViolation, "scene object '" + objects[i].name + "' has a non-finite position");
    }
  }
}

Scene default_scene() {
  constexpr double kSpacing = 0.3048;
  constexpr double kGraspHeight = 0.08;
  Scene scene;
  scene.objects = {
      {0, "cereal", Vec3(-kSpacing, 0.0, kGraspHeight), Affordance::Both},
      {1, "banana", Vec3(0.0, 0.0, kGraspHeight), Affordance::TopGrasp},
      {2, "milk", Vec3(kSpacing, 0.0, kGraspHeight), Affordance::SideGrasp},
  };
  return scene;
}

double angle_between(const Vec3& u, const Vec3& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (!(nu > kDegenerateEps) || !(nv > kDegenerateEps)) {
    throw Error(ErrorCode::DegenerateVector, "angle between vectors with norm <= 1e-9");
  }
  const double cosine = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
  return std::acos(cosine);
}

std::vector<double> head_angles(const Observation& obs, const Scene& scene) {
  if (scene.empty()) throw Error(ErrorCode::EmptyScene, "head angles need at least one object");
  std::vector<double> angles;
  angles.reserve(scene.size());
  for (const auto& object : scene.objects) {
    angles.push_back(angle_between(obs.head_dir, object.position - obs.nose));
  }
  return angles;
}

Vec3 hand_normal(const Observation& obs) {
  const auto& p = obs.hand_points;
  Vec3 normal = (p[1] - p[0]).cross(p[2] - p[0]);
  if (!(normal.norm() > kDegenerateEps)) {
    throw Error(ErrorCode::DegenerateHand, "hand points are collinear or coincident");
  }
  if (normal.z() < 0.0) normal = -normal;
  return normal;
}

double hand_orientation_angle(const Observation& obs) {
  return angle_between(hand_normal(obs), Vec3::UnitZ());
}

Vec3 hand_velocity(const Observation& prev, const Observation& cur) {
  const double dt = cur.t - prev.t;
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::NonMonotoneTime,
                "frame time " + std::to_string(cur.t) + " does not follow " + std::to_string(prev.t));
  }
  return (cur.wrist - prev.wrist) / dt;
}

std::vector<double> motion_angles(const Vec3& velocity, const Vec3& wrist, const Scene& scene) {
  std::vector<double> angles;
  angles.reserve(scene.size());
  for (const auto& object : scene.objects) {
    angles.push_back(angle_between(velocity, object.position - wrist));
  }
  return angles;
}

VelocityFilter::VelocityFilter(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "velocity smoothing factor must lie in (0, 1]");
  }
}

std::optional<Vec3> VelocityFilter::push(const Observation& obs) {
  if (!prev_) {
    prev_ = obs;
    return std::nullopt;
  }
  const Vec3 raw = hand_velocity(*prev_, obs);
  prev_ = obs;
  smoothed_ = smoothed_ ? Vec3(alpha_ * raw + (1.0 - alpha_) * *smoothed_) : raw;
  return smoothed_;
}

void VelocityFilter::reset() {
  prev_.reset();
  smoothed_.reset();
}

}  // namespace bi
