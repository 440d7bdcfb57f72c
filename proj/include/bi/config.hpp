#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "bi/dataset.hpp"
#include "bi/inference.hpp"
#include "bi/obstacle.hpp"
#include "bi/taskplan.hpp"

namespace bi {

// Everything the CLI can tune, in file units (angles in degrees). The file
// is JSON with comments; unknown keys are rejected.
struct Config {
  // evidence / inference
  double gamma_h_deg = 30.0;
  double gamma_v_deg = 60.0;
  double v_min = 0.02;
  double velocity_alpha = 0.5;
  double smoothing_alpha = 1.0;
  double forgetting = 0.0;
  std::size_t hysteresis_k = 5;
  double commit_threshold = 0.7;

  // obstacle / replanning
  double r_b = kDefaultRatioB;
  double r_c = kDefaultRatioC;
  double sphere_radius_ratio = 1.0;
  double sphere_spacing_ratio = 0.5;
  double margin = 0.05;
  double waypoint_spacing = 0.02;
  Vec3 robot_home = Vec3(0.0, 0.55, 0.35);
  double robot_task_duration = 2.0;

  // synthetic reaches
  double duration = 1.5;
  double fps = 30.0;
  double sigma_p = 0.005;
  double sigma_h_deg = 3.0;
  double head_onset = 0.1;
  double head_sweep = 0.3;
  double hand_rest_deg = 80.0;
  double hand_flexion_deg = 10.0;
  double hand_neutral_deg = 45.0;
  double hand_onset = 0.05;
  double hand_span = 0.2;
  Vec3 wrist_start = Vec3(0.60, -0.25, 0.12);
  Vec3 nose = Vec3(0.0, -0.60, 0.45);
  Vec3 head_forward = Vec3(0.0, 0.60, -0.37);
  double detour_deg = 30.0;

  // corpus
  std::size_t per_target_count = 10;
  std::uint64_t seed = 7;
  double train_fraction = 2.0 / 3.0;

  PredictorConfig predictor_config() const;
  GenSpec gen_spec() const;
  ReplanConfig replan_config() const;
  SphereParams sphere_params() const;

  void validate() const;
  bool operator==(const Config&) const = default;
};

Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);
// Annotated file; each value says whether it is a published setting or a
// local convention.
void write_config(std::ostream& out, const Config& config);

}  // namespace bi
