#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bi/geometry.hpp"
#include "bi/obstacle.hpp"

namespace bi {

struct Subtask {
  std::string id;
  std::size_t object = 0;

  bool operator==(const Subtask&) const = default;
};

// The robot's ordered plan. Subtasks before the cursor are done; the rest
// are pending. An object appears in at most one subtask.
class TaskSequence {
 public:
  TaskSequence() = default;
  explicit TaskSequence(std::vector<Subtask> subtasks);

  const std::vector<Subtask>& subtasks() const { return subtasks_; }
  std::size_t cursor() const { return cursor_; }
  std::span<const Subtask> pending() const;
  const Subtask* next() const;

  // Marks the next pending subtask done.
  std::optional<Subtask> complete_next();
  // Removes the pending subtask bound to `object`, if any.
  std::optional<Subtask> remove_pending(std::size_t object);

  bool operator==(const TaskSequence&) const = default;

 private:
  std::vector<Subtask> subtasks_;
  std::size_t cursor_ = 0;
};

struct CommitPolicy {
  std::size_t hysteresis_k = 5;
  double commit_threshold = 0.7;
};

struct Prediction {
  std::size_t target = 0;
  double posterior = 0.0;  // posterior of `target` at that frame
};

// Commits i iff the last k predictions are all i and the latest posterior of
// i reaches the threshold.
std::optional<std::size_t> commit_intent(std::span<const Prediction> history, const CommitPolicy& policy);

enum class PlanEventKind { SubtaskRemoved, ObstacleUpdated, PathBlocked, SubtaskCompleted };

std::string_view to_string(PlanEventKind kind);

struct BlockedPath {
  std::string subtask;
  std::size_t waypoint = 0;
};

struct PlanEvent {
  double t = 0.0;
  PlanEventKind kind = PlanEventKind::ObstacleUpdated;
  // Subtask id for SubtaskRemoved / SubtaskCompleted.
  std::variant<std::string, VirtualEllipsoid, BlockedPath> payload;
};

std::pair<TaskSequence, std::optional<PlanEvent>> adapt_sequence(const TaskSequence& seq, std::size_t committed,
                                                                 double t = 0.0);

// First waypoint inside the ellipsoid grown by `margin`, if any.
std::optional<std::size_t> check_path(std::span<const Vec3> waypoints, const VirtualEllipsoid& obstacle,
                                      double margin);

// Evenly sampled segment from `from` to `to`, endpoints included, no two
// consecutive waypoints further apart than `spacing`.
std::vector<Vec3> straight_path(const Vec3& from, const Vec3& to, double spacing);

struct ReplanConfig {
  CommitPolicy policy;
  double r_b = kDefaultRatioB;
  double r_c = kDefaultRatioC;
  double margin = 0.05;            // m
  double waypoint_spacing = 0.02;  // m
  Vec3 robot_home = Vec3(0.0, 0.55, 0.35);
};

struct ReplanOutcome {
  std::optional<std::size_t> committed;
  std::optional<VirtualEllipsoid> obstacle;
  std::vector<PlanEvent> events;
};

// Drives the task sequence from per-frame predictions: debounced commits
// remove the matching subtask, rebuild the wrist-to-target obstacle and check
// the robot's straight-line paths against it.
class ReplanSession {
 public:
  ReplanSession(TaskSequence sequence, const Scene& scene, const ReplanConfig& config);

  // A commit clears the prediction history; the caller resets its belief.
  ReplanOutcome on_frame(double t, const Vec3& wrist, const Prediction& prediction);

  // The robot finishes its current subtask.
  std::optional<PlanEvent> complete_current(double t);

  const TaskSequence& sequence() const { return sequence_; }
  const std::optional<std::size_t>& active_intent() const { return active_intent_; }

 private:
  std::optional<PlanEvent> check_subtask_path(double t, const Subtask& subtask, const VirtualEllipsoid& obstacle) const;

  TaskSequence sequence_;
  Scene scene_;
  ReplanConfig config_;
  std::deque<Prediction> history_;
  std::optional<std::size_t> active_intent_;
};

}  // namespace bi
