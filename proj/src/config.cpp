#include "bi/config.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "bi/error.hpp"

namespace bi {
namespace {

using json = nlohmann::json;
using Member = std::variant<double Config::*, std::uint64_t Config::*, Vec3 Config::*>;
static_assert(std::is_same_v<std::size_t, std::uint64_t>, "count fields share the integer member type");

struct Field {
  const char* key;
  Member member;
  const char* note;
};

// Order here is the order of the generated file.
const Field kFields[] = {
    {"gamma_h_deg", &Config::gamma_h_deg, "flexion/neutral hand threshold, degrees (convention; the method leaves it open)"},
    {"gamma_v_deg", &Config::gamma_v_deg, "neutral/other hand threshold, degrees (convention)"},
    {"v_min", &Config::v_min, "m/s below which the hand carries no motion evidence (convention)"},
    {"velocity_alpha", &Config::velocity_alpha, "EMA factor on wrist velocity; 1 = plain two-frame difference (convention)"},
    {"smoothing_alpha", &Config::smoothing_alpha, "Laplace pseudo-count per evidence combination (convention)"},
    {"forgetting", &Config::forgetting, "lambda mixed into the prior each frame; 0 = posterior-as-prior recursion (published)"},
    {"hysteresis_k", &Config::hysteresis_k, "identical consecutive predictions before a commit (convention)"},
    {"commit_threshold", &Config::commit_threshold, "posterior needed to commit (convention)"},
    {"r_b", &Config::r_b, "intermediate/major semi-axis ratio (published: 1/2)"},
    {"r_c", &Config::r_c, "minor/intermediate semi-axis ratio (published: 1/3)"},
    {"sphere_radius_ratio", &Config::sphere_radius_ratio, "sphere radius as a multiple of b (convention)"},
    {"sphere_spacing_ratio", &Config::sphere_spacing_ratio, "max sphere spacing as a multiple of b (convention)"},
    {"margin", &Config::margin, "m added to every semi-axis when checking robot paths (convention)"},
    {"waypoint_spacing", &Config::waypoint_spacing, "m between robot path waypoints (convention)"},
    {"robot_home", &Config::robot_home, "robot gripper start position, m (convention)"},
    {"robot_task_duration", &Config::robot_task_duration, "s the simulated robot spends per subtask (convention)"},
    {"duration", &Config::duration, "s per synthetic reach (convention)"},
    {"fps", &Config::fps, "frames per second (published recording rate: 30)"},
    {"sigma_p", &Config::sigma_p, "m keypoint noise (convention)"},
    {"sigma_h_deg", &Config::sigma_h_deg, "degrees head-direction noise (convention)"},
    {"head_onset", &Config::head_onset, "fraction of the reach before the head turns (convention)"},
    {"head_sweep", &Config::head_sweep, "fraction of the reach the head turn takes (convention)"},
    {"hand_rest_deg", &Config::hand_rest_deg, "palm tilt before the grasp shapes, degrees (convention)"},
    {"hand_flexion_deg", &Config::hand_flexion_deg, "palm tilt for top grasps, degrees (convention)"},
    {"hand_neutral_deg", &Config::hand_neutral_deg, "palm tilt for side grasps, degrees (convention)"},
    {"hand_onset", &Config::hand_onset, "fraction of the reach before the palm turns (convention)"},
    {"hand_span", &Config::hand_span, "fraction of the reach the palm turn takes (convention)"},
    {"wrist_start", &Config::wrist_start, "wrist rest position, m (convention)"},
    {"nose", &Config::nose, "nose position, m (convention)"},
    {"head_forward", &Config::head_forward, "head direction before the turn (convention)"},
    {"detour_deg", &Config::detour_deg, "initial heading rotation of curved reaches, degrees (convention)"},
    {"per_target_count", &Config::per_target_count, "reaches per object (published corpus: 10)"},
    {"seed", &Config::seed, "corpus seed (convention)"},
    {"train_fraction", &Config::train_fraction, "share of the corpus used for CPT learning (published split: 20 of 30)"},
};

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

void assign(Config& config, const Field& field, const json& value) {
  std::visit(
      [&](auto member) {
        using T = std::remove_reference_t<decltype(config.*member)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!value.is_number()) config_error(std::string(field.key) + " must be a number");
          config.*member = value.get<double>();
        } else if constexpr (std::is_same_v<T, Vec3>) {
          if (!value.is_array() || value.size() != 3) config_error(std::string(field.key) + " must be [x, y, z]");
          for (std::size_t i = 0; i < 3; ++i) {
            if (!value[i].is_number()) config_error(std::string(field.key) + " must be [x, y, z]");
            (config.*member)[static_cast<Eigen::Index>(i)] = value[i].get<double>();
          }
        } else {
          if (!value.is_number_unsigned()) config_error(std::string(field.key) + " must be a non-negative integer");
          config.*member = value.get<T>();
        }
      },
      field.member);
}

std::string render(const Config& config, const Field& field) {
  return std::visit(
      [&](auto member) {
        using T = std::remove_reference_t<decltype(config.*member)>;
        if constexpr (std::is_same_v<T, Vec3>) {
          const Vec3& v = config.*member;
          return json::array({v.x(), v.y(), v.z()}).dump();
        } else {
          return json(config.*member).dump();
        }
      },
      field.member);
}

}  // namespace

PredictorConfig Config::predictor_config() const {
  PredictorConfig p;
  p.evidence.gamma_h = deg2rad(gamma_h_deg);
  p.evidence.gamma_v = deg2rad(gamma_v_deg);
  p.evidence.v_min = v_min;
  p.evidence.velocity_alpha = velocity_alpha;
  p.smoothing_alpha = smoothing_alpha;
  p.forgetting = forgetting;
  p.hysteresis_k = hysteresis_k;
  p.commit_threshold = commit_threshold;
  return p;
}

GenSpec Config::gen_spec() const {
  GenSpec g;
  g.duration = duration;
  g.fps = fps;
  g.sigma_p = sigma_p;
  g.sigma_h = deg2rad(sigma_h_deg);
  g.head_onset = head_onset;
  g.head_sweep = head_sweep;
  g.hand.rest_gamma = deg2rad(hand_rest_deg);
  g.hand.flexion_gamma = deg2rad(hand_flexion_deg);
  g.hand.neutral_gamma = deg2rad(hand_neutral_deg);
  g.hand.onset = hand_onset;
  g.hand.span = hand_span;
  g.wrist_start = wrist_start;
  g.nose = nose;
  g.head_forward = head_forward;
  g.detour_deg = detour_deg;
  return g;
}

ReplanConfig Config::replan_config() const {
  ReplanConfig r;
  r.policy.hysteresis_k = hysteresis_k;
  r.policy.commit_threshold = commit_threshold;
  r.r_b = r_b;
  r.r_c = r_c;
  r.margin = margin;
  r.waypoint_spacing = waypoint_spacing;
  r.robot_home = robot_home;
  return r;
}

SphereParams Config::sphere_params() const { return SphereParams{sphere_radius_ratio, sphere_spacing_ratio}; }

void Config::validate() const {
  // A commit threshold above 1 is allowed and disables commits.
  predictor_config().validate();
  if (!(r_b > 0.0 && r_b <= 1.0) || !(r_c > 0.0 && r_c <= 1.0)) config_error("r_b and r_c must lie in (0, 1]");
  if (!(sphere_radius_ratio > 0.0) || !(sphere_spacing_ratio > 0.0)) config_error("sphere ratios must be positive");
  if (!(margin >= 0.0)) config_error("margin must be >= 0");
  if (!(waypoint_spacing > 0.0)) config_error("waypoint_spacing must be positive");
  if (!(robot_task_duration > 0.0)) config_error("robot_task_duration must be positive");
  if (per_target_count < 1) config_error("per_target_count must be >= 1");
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) config_error("train_fraction must lie in [0, 1]");
  GenSpec g = gen_spec();
  g.validate();
}

Config parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  if (!doc.is_object()) config_error("config must be a JSON object");
  Config config;
  std::set<std::string> known;
  for (const auto& field : kFields) {
    known.insert(field.key);
    if (const auto it = doc.find(field.key); it != doc.end()) assign(config, field, *it);
  }
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) config_error("unknown config key '" + key + "'");
  }
  config.validate();
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_config(std::ostream& out, const Config& config) {
  out << "// bi configuration. Comments are allowed; unknown keys are rejected.\n{\n";
  const std::size_t count = std::size(kFields);
  for (std::size_t i = 0; i < count; ++i) {
    const Field& field = kFields[i];
    out << "  // " << field.note << '\n';
    out << "  \"" << field.key << "\": " << render(config, field) << (i + 1 < count ? "," : "") << '\n';
  }
  out << "}\n";
}

}  // namespace bi
