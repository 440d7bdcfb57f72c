#include "bi/taskplan.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bi/error.hpp"

namespace bi {

TaskSequence::TaskSequence(std::vector<Subtask> subtasks) : subtasks_(std::move(subtasks)) {
  std::set<std::size_t> objects;
  std::set<std::string> ids;
  for (const auto& subtask : subtasks_) {
    if (!objects.insert(subtask.object).second) {
      throw Error(ErrorCode::InvalidConfig, "object " + std::to_string(subtask.object) + " appears in two subtasks");
    }
    if (!ids.insert(subtask.id).second) throw Error(ErrorCode::InvalidConfig, "duplicate subtask id '" + subtask.id + "'");
  }
}

std::span<const Subtask> TaskSequence::pending() const {
  return std::span<const Subtask>(subtasks_).subspan(cursor_);
}

const Subtask* TaskSequence::next() const { return cursor_ < subtasks_.size() ? &subtasks_[cursor_] : nullptr; }

std::optional<Subtask> TaskSequence::complete_next() {
  if (cursor_ >= subtasks_.size()) return std::nullopt;
  return subtasks_[cursor_++];
}

std::optional<Subtask> TaskSequence::remove_pending(std::size_t object) {
  const auto first = subtasks_.begin() + static_cast<std::ptrdiff_t>(cursor_);
  const auto it = std::find_if(first, subtasks_.end(), [object](const Subtask& s) { return s.object == object; });
  if (it == subtasks_.end()) return std::nullopt;
  Subtask removed = *it;
  subtasks_.erase(it);
  return removed;
}

std::optional<std::size_t> commit_intent(std::span<const Prediction> history, const CommitPolicy& policy) {
  const std::size_t k = std::max<std::size_t>(policy.hysteresis_k, 1);
  if (history.size() < k) return std::nullopt;
  const auto window = history.last(k);
  const std::size_t target = window.back().target;
  const bool streak = std::all_of(window.begin(), window.end(), [target](const Prediction& p) { return p.target == target; });
  if (!streak || window.back().posterior < policy.commit_threshold) return std::nullopt;
  return target;
}

std::string_view to_string(PlanEventKind kind) {
  switch (kind) {
    case PlanEventKind::SubtaskRemoved: return "SubtaskRemoved";
    case PlanEventKind::ObstacleUpdated: return "ObstacleUpdated";
    case PlanEventKind::PathBlocked: return "PathBlocked";
    case PlanEventKind::SubtaskCompleted: return "SubtaskCompleted";
  }
  return "ObstacleUpdated";
}

std::pair<TaskSequence, std::optional<PlanEvent>> adapt_sequence(const TaskSequence& seq, std::size_t committed,
                                                                 double t) {
  TaskSequence out = seq;
  const auto removed = out.remove_pending(committed);
  if (!removed) return {std::move(out), std::nullopt};
  return {std::move(out), PlanEvent{t, PlanEventKind::SubtaskRemoved, removed->id}};
}

std::optional<std::size_t> check_path(std::span<const Vec3> waypoints, const VirtualEllipsoid& obstacle,
                                      double margin) {
  if (!(margin >= 0.0)) throw Error(ErrorCode::InvalidConfig, "margin must be >= 0");
  const VirtualEllipsoid grown = margin > 0.0 ? inflate(obstacle, margin) : obstacle;
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    if (contains(grown, waypoints[i])) return i;
  }
  return std::nullopt;
}

std::vector<Vec3> straight_path(const Vec3& from, const Vec3& to, double spacing) {
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidConfig, "waypoint spacing must be positive");
  const double length = (to - from).norm();
  const auto intervals = std::max(1, static_cast<int>(std::ceil(length / spacing)));
  std::vector<Vec3> path;
  path.reserve(static_cast<std::size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(intervals);
    path.push_back(from + s * (to - from));
  }
  return path;
}

ReplanSession::ReplanSession(TaskSequence sequence, const Scene& scene, const ReplanConfig& config)
    : sequence_(std::move(sequence)), scene_(scene), config_(config) {
  for (const auto& subtask : sequence_.subtasks()) {
    if (subtask.object >= scene_.size()) {
      throw Error(ErrorCode::InvalidConfig, "subtask '" + subtask.id + "' refers to an object outside the scene");
    }
  }
}

std::optional<PlanEvent> ReplanSession::check_subtask_path(double t, const Subtask& subtask,
                                                           const VirtualEllipsoid& obstacle) const {
  const auto path = straight_path(config_.robot_home, scene_[subtask.object].position, config_.waypoint_spacing);
  const auto blocked = check_path(path, obstacle, config_.margin);
  if (!blocked) return std::nullopt;
  return PlanEvent{t, PlanEventKind::PathBlocked, BlockedPath{subtask.id, *blocked}};
}

ReplanOutcome ReplanSession::on_frame(double t, const Vec3& wrist, const Prediction& prediction) {
  ReplanOutcome outcome;
  history_.push_back(prediction);
  while (history_.size() > config_.policy.hysteresis_k) history_.pop_front();

  const std::vector<Prediction> window(history_.begin(), history_.end());
  outcome.committed = commit_intent(window, config_.policy);
  if (outcome.committed) {
    active_intent_ = outcome.committed;
    history_.clear();
  }
  if (!active_intent_) return outcome;

  const Vec3& target = scene_[*active_intent_].position;
  if (!((target - wrist).norm() > kDegenerateEps)) return outcome;
  const VirtualEllipsoid obstacle = build_ellipsoid(wrist, target, config_.r_b, config_.r_c);
  outcome.obstacle = obstacle;
  if (!outcome.committed) return outcome;

  auto [adapted, removed] = adapt_sequence(sequence_, *outcome.committed, t);
  sequence_ = std::move(adapted);
  if (removed) outcome.events.push_back(*removed);
  outcome.events.push_back(PlanEvent{t, PlanEventKind::ObstacleUpdated, obstacle});
  if (removed) {
    const Subtask skipped{std::get<std::string>(removed->payload), *outcome.committed};
    if (auto blocked = check_subtask_path(t, skipped, obstacle)) outcome.events.push_back(std::move(*blocked));
  }
  if (const Subtask* next = sequence_.next()) {
    if (auto blocked = check_subtask_path(t, *next, obstacle)) outcome.events.push_back(std::move(*blocked));
  }
  return outcome;
}

std::optional<PlanEvent> ReplanSession::complete_current(double t) {
  const auto done = sequence_.complete_next();
  if (!done) return std::nullopt;
  return PlanEvent{t, PlanEventKind::SubtaskCompleted, done->id};
}

}  // namespace bi
