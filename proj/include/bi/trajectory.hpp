#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bi/geometry.hpp"

namespace bi {

enum class TrajectorySource { Recorded, Synthetic };

std::string_view to_string(TrajectorySource source);
TrajectorySource source_from_string(std::string_view name);

struct TrajectoryMeta {
  double fps = 30.0;
  std::string subject = "anonymous";
  TrajectorySource source = TrajectorySource::Recorded;
  std::optional<std::uint64_t> seed;
  std::string variant;  // generator variant, empty for recorded data
};

// A labeled reach: every frame of the human approaching scene object `label`.
struct Trajectory {
  Scene scene;
  std::vector<Observation> frames;
  std::size_t label = 0;
  TrajectoryMeta meta;

  // Throws SchemaViolation (or NonMonotoneTime-free equivalent) naming the
  // offending frame. Requires >= 2 frames, strictly increasing time, unit
  // head directions and a frame spacing within 10% of 1/fps.
  void validate() const;
};

}  // namespace bi
