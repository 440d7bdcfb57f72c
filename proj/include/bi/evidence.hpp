#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "bi/geometry.hpp"

namespace bi {

// Settings that map raw keypoints onto the discrete parent nodes. A CPT is
// only meaningful together with the settings it was learned under.
struct EvidenceConfig {
  double gamma_h = deg2rad(30.0);  // flexion/neutral boundary
  double gamma_v = deg2rad(60.0);  // neutral/other boundary
  double v_min = 0.02;             // m/s; slower hands carry no motion evidence
  double velocity_alpha = 0.5;     // EMA factor on wrist velocity

  void validate() const;
  bool operator==(const EvidenceConfig&) const = default;
};

struct EvidenceVector {
  std::vector<double> theta;
  std::optional<std::vector<double>> beta;
  double gamma = 0.0;
};

enum class HandState { Flexion = 0, Neutral = 1, Other = 2 };
inline constexpr std::size_t kHandStates = 3;

std::string_view to_string(HandState state);

struct DiscreteEvidence {
  std::size_t head_target = 0;
  std::optional<std::size_t> motion_target;
  HandState hand_state = HandState::Other;

  bool operator==(const DiscreteEvidence&) const = default;
};

// Which parent nodes an evidence space keeps. FullBI keeps all three.
enum class BaselineKind { FullBI, HeadOnly, HandOrientationOnly, HandVelocityOnly };

std::string_view to_string(BaselineKind kind);
BaselineKind baseline_from_string(std::string_view name);

HandState classify_hand(double gamma, double gamma_h, double gamma_v);

DiscreteEvidence discretize(const EvidenceVector& ev, double gamma_h, double gamma_v);

// Size of the combination space: n(n+1)*3 for FullBI, n / 3 / n+1 for the
// head, hand-orientation and hand-velocity projections.
std::size_t evidence_space_size(std::size_t n_objects, BaselineKind kind);

// Dense index of e inside the evidence space of `kind`. The motion node uses
// slot n for "no motion".
std::size_t evidence_index(const DiscreteEvidence& e, std::size_t n_objects, BaselineKind kind);

// Inverse of evidence_index for FullBI. Fields a projection drops are left at
// their defaults.
DiscreteEvidence evidence_from_index(std::size_t index, std::size_t n_objects, BaselineKind kind);

// Stateful per-stream feature extraction: keeps the previous frame and the
// smoothed velocity, nothing else.
class EvidenceExtractor {
 public:
  explicit EvidenceExtractor(const EvidenceConfig& config = {});

  EvidenceVector extract(const Observation& obs, const Scene& scene);
  DiscreteEvidence observe(const Observation& obs, const Scene& scene);
  void reset();

  const EvidenceConfig& config() const { return config_; }

 private:
  EvidenceConfig config_;
  VelocityFilter velocity_;
};

}  // namespace bi
