#include "bi/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bi/error.hpp"

namespace bi {
namespace {

std::size_t argmin(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

}  // namespace

void EvidenceConfig::validate() const {
  if (!(gamma_h >= 0.0 && gamma_h < gamma_v && gamma_v <= kPi)) {
    throw Error(ErrorCode::InvalidThresholds, "hand thresholds must satisfy 0 <= gamma_h < gamma_v <= pi");
  }
  if (!(v_min >= 0.0) || !std::isfinite(v_min)) {
    throw Error(ErrorCode::InvalidConfig, "v_min must be a finite non-negative speed");
  }
  if (!(velocity_alpha > 0.0 && velocity_alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "velocity_alpha must lie in (0, 1]");
  }
}

std::string_view to_string(HandState state) {
  switch (state) {
    case HandState::Flexion: return "flexion";
    case HandState::Neutral: return "neutral";
    case HandState::Other: return "other";
  }
  return "other";
}

std::string_view to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::FullBI: return "full";
    case BaselineKind::HeadOnly: return "head";
    case BaselineKind::HandOrientationOnly: return "hand";
    case BaselineKind::HandVelocityOnly: return "velocity";
  }
  return "full";
}

BaselineKind baseline_from_string(std::string_view name) {
  if (name == "full") return BaselineKind::FullBI;
  if (name == "head") return BaselineKind::HeadOnly;
  if (name == "hand") return BaselineKind::HandOrientationOnly;
  if (name == "velocity") return BaselineKind::HandVelocityOnly;
  throw Error(ErrorCode::InvalidConfig, "unknown modality set '" + std::string(name) + "'");
}

HandState classify_hand(double gamma, double gamma_h, double gamma_v) {
  if (!(gamma_h < gamma_v)) {
    throw Error(ErrorCode::InvalidThresholds, "gamma_h must be strictly below gamma_v");
  }
  if (gamma < gamma_h) return HandState::Flexion;
  if (gamma < gamma_v) return HandState::Neutral;
  return HandState::Other;
}

DiscreteEvidence discretize(const EvidenceVector& ev, double gamma_h, double gamma_v) {
  if (ev.theta.empty()) throw Error(ErrorCode::EmptyScene, "evidence vector has no objects");
  if (ev.beta && ev.beta->size() != ev.theta.size()) {
    throw Error(ErrorCode::InconsistentSceneSize, "theta and beta lengths differ");
  }
  DiscreteEvidence out;
  out.head_target = argmin(ev.theta);
  if (ev.beta) out.motion_target = argmin(*ev.beta);
  out.hand_state = classify_hand(ev.gamma, gamma_h, gamma_v);
  return out;
}

std::size_t evidence_space_size(std::size_t n_objects, BaselineKind kind) {
  switch (kind) {
    case BaselineKind::FullBI: return n_objects * (n_objects + 1) * kHandStates;
    case BaselineKind::HeadOnly: return n_objects;
    case BaselineKind::HandOrientationOnly: return kHandStates;
    case BaselineKind::HandVelocityOnly: return n_objects + 1;
  }
  return 0;
}

std::size_t evidence_index(const DiscreteEvidence& e, std::size_t n_objects, BaselineKind kind) {
  const std::size_t motion_slot = e.motion_target.value_or(n_objects);
  const auto hand = static_cast<std::size_t>(e.hand_state);
  switch (kind) {
    case BaselineKind::FullBI: return (e.head_target * (n_objects + 1) + motion_slot) * kHandStates + hand;
    case BaselineKind::HeadOnly: return e.head_target;
    case BaselineKind::HandOrientationOnly: return hand;
    case BaselineKind::HandVelocityOnly: return motion_slot;
  }
  return 0;
}

DiscreteEvidence evidence_from_index(std::size_t index, std::size_t n_objects, BaselineKind kind) {
  DiscreteEvidence e;
  auto motion_from_slot = [n_objects](std::size_t slot) -> std::optional<std::size_t> {
    if (slot == n_objects) return std::nullopt;
    return slot;
  };
  switch (kind) {
    case BaselineKind::FullBI:
      e.hand_state = static_cast<HandState>(index % kHandStates);
      index /= kHandStates;
      e.motion_target = motion_from_slot(index % (n_objects + 1));
      e.head_target = index / (n_objects + 1);
      break;
    case BaselineKind::HeadOnly: e.head_target = index; break;
    case BaselineKind::HandOrientationOnly: e.hand_state = static_cast<HandState>(index); break;
    case BaselineKind::HandVelocityOnly: e.motion_target = motion_from_slot(index); break;
  }
  return e;
}

EvidenceExtractor::EvidenceExtractor(const EvidenceConfig& config)
    : config_(config), velocity_(config.velocity_alpha) {
  config_.validate();
}

EvidenceVector EvidenceExtractor::extract(const Observation& obs, const Scene& scene) {
  EvidenceVector ev;
  ev.theta = head_angles(obs, scene);
  ev.gamma = hand_orientation_angle(obs);
  const auto velocity = velocity_.push(obs);
  if (velocity && velocity->norm() >= config_.v_min && velocity->norm() > kDegenerateEps) {
    // A wrist sitting on an object has arrived there: that object is the
    // motion target.
    const auto arrived = std::find_if(scene.objects.begin(), scene.objects.end(), [&](const SceneObject& o) {
      return (o.position - obs.wrist).norm() <= kDegenerateEps;
    });
    if (arrived == scene.objects.end()) {
      ev.beta = motion_angles(*velocity, obs.wrist, scene);
    } else {
      ev.beta = std::vector<double>(scene.size(), kPi);
      (*ev.beta)[static_cast<std::size_t>(arrived - scene.objects.begin())] = 0.0;
    }
  }
  return ev;
}

DiscreteEvidence EvidenceExtractor::observe(const Observation& obs, const Scene& scene) {
  return discretize(extract(obs, scene), config_.gamma_h, config_.gamma_v);
}

void EvidenceExtractor::reset() { velocity_.reset(); }

}  // namespace bi
