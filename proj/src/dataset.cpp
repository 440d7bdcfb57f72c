#include "bi/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bi/error.hpp"

namespace bi {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(TrajectorySource source) {
  return source == TrajectorySource::Synthetic ? "synthetic" : "recorded";
}

TrajectorySource source_from_string(std::string_view name) {
  if (name == "synthetic") return TrajectorySource::Synthetic;
  if (name == "recorded") return TrajectorySource::Recorded;
  throw Error(ErrorCode::SchemaViolation, "unknown trajectory source '" + std::string(name) + "'");
}

std::string_view to_string(ReachVariant variant) {
  switch (variant) {
    case ReachVariant::Straight: return "straight";
    case ReachVariant::CurvedClockwise: return "curved_cw";
    case ReachVariant::CurvedCounterClockwise: return "curved_ccw";
    case ReachVariant::InattentiveHead: return "inattentive_head";
  }
  return "straight";
}

ReachVariant variant_from_string(std::string_view name) {
  for (auto v : {ReachVariant::Straight, ReachVariant::CurvedClockwise, ReachVariant::CurvedCounterClockwise,
                 ReachVariant::InattentiveHead}) {
    if (to_string(v) == name) return v;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown reach variant '" + std::string(name) + "'");
}

void Trajectory::validate() const {
  scene.validate();
  if (scene.empty()) throw Error(ErrorCode::SchemaViolation, "trajectory scene has no objects");
  if (label >= scene.size()) {
    throw Error(ErrorCode::SchemaViolation, "label " + std::to_string(label) + " outside a scene of " +
                                                std::to_string(scene.size()) + " objects");
  }
  if (frames.size() < 2) throw Error(ErrorCode::SchemaViolation, "a trajectory needs at least 2 frames");
  if (!(meta.fps > 0.0) || !std::isfinite(meta.fps)) throw Error(ErrorCode::SchemaViolation, "fps must be positive");
  const double nominal = 1.0 / meta.fps;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const auto& f = frames[k];
    const bool finite = std::isfinite(f.t) && f.nose.allFinite() && f.head_dir.allFinite() && f.wrist.allFinite() &&
                        f.hand_points[0].allFinite() && f.hand_points[1].allFinite() && f.hand_points[2].allFinite();
    if (!finite) throw Error(ErrorCode::SchemaViolation, "frame " + std::to_string(k) + " has non-finite values");
    if (std::abs(f.head_dir.norm() - 1.0) > 1e-6) {
      throw Error(ErrorCode::SchemaViolation, "frame " + std::to_string(k) + " head_dir is not unit length");
    }
    if (k == 0) continue;
    const double dt = f.t - frames[k - 1].t;
    if (!(dt > 0.0)) {
      throw Error(ErrorCode::SchemaViolation, "frame " + std::to_string(k) + " time does not increase");
    }
    if (std::abs(dt - nominal) > 0.1 * nominal) {
      throw Error(ErrorCode::SchemaViolation, "frame " + std::to_string(k) + " spacing " + std::to_string(dt) +
                                                  " s is inconsistent with " + std::to_string(meta.fps) + " fps");
    }
  }
}

// --- Generator -----------------------------------------------------------------

void GenSpec::validate() const {
  scene.validate();
  if (scene.empty()) throw Error(ErrorCode::EmptyScene, "generator scene is empty");
  if (target >= scene.size()) throw Error(ErrorCode::InvalidConfig, "generator target outside the scene");
  if (!(duration > 0.0) || !(fps > 0.0)) throw Error(ErrorCode::InvalidConfig, "duration and fps must be positive");
  if (!(sigma_p >= 0.0) || !(sigma_h >= 0.0)) throw Error(ErrorCode::InvalidConfig, "noise levels must be >= 0");
  if (!(head_onset >= 0.0 && head_onset <= 1.0) || !(head_sweep >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "head onset must lie in [0, 1] and sweep must be >= 0");
  }
  if (!(hand.onset >= 0.0 && hand.onset <= 1.0) || !(hand.span >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "hand schedule onset must lie in [0, 1] and span must be >= 0");
  }
  if (!(std::abs(detour_deg) < 89.0)) throw Error(ErrorCode::InvalidConfig, "detour angle must stay below 89 degrees");
  if (!(head_forward.norm() > kDegenerateEps)) throw Error(ErrorCode::InvalidConfig, "head_forward is degenerate");
  if (!((scene[target].position - wrist_start).norm() > kDegenerateEps)) {
    throw Error(ErrorCode::InvalidConfig, "wrist starts on the target");
  }
}

double min_jerk(double s) {
  s = std::clamp(s, 0.0, 1.0);
  const double s3 = s * s * s;
  return s3 * (10.0 - 15.0 * s + 6.0 * s * s);
}

namespace {

double schedule(double tau, double onset, double span) {
  if (span <= 0.0) return tau >= onset ? 1.0 : 0.0;
  return min_jerk((tau - onset) / span);
}

Vec3 slerp(const Vec3& from, const Vec3& to, double u) {
  if (u <= 0.0) return from;
  if (u >= 1.0) return to;
  const double omega = std::acos(std::clamp(from.dot(to), -1.0, 1.0));
  if (omega < 1e-9) return to;
  const double s = std::sin(omega);
  return (std::sin((1.0 - u) * omega) / s) * from + (std::sin(u * omega) / s) * to;
}

Vec3 horizontal_unit(const Vec3& v) {
  Vec3 h(v.x(), v.y(), 0.0);
  if (h.norm() <= kDegenerateEps) return Vec3::UnitY();
  return h.normalized();
}

double signed_detour(const GenSpec& spec) {
  switch (spec.variant) {
    case ReachVariant::CurvedCounterClockwise: return deg2rad(spec.detour_deg);
    case ReachVariant::CurvedClockwise: return -deg2rad(spec.detour_deg);
    default: return 0.0;
  }
}

}  // namespace

Vec3 initial_heading(const GenSpec& spec) {
  const Vec3 reach = spec.scene[spec.target].position - spec.wrist_start;
  const Vec3 lateral = Vec3::UnitZ().cross(horizontal_unit(reach));
  const double amplitude = Vec3(reach.x(), reach.y(), 0.0).norm() * std::tan(signed_detour(spec)) / kPi;
  return horizontal_unit(reach + kPi * amplitude * lateral);
}

Trajectory generate(const GenSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto jitter = [&](double sigma) -> Vec3 {
    const double x = gauss(rng);
    const double y = gauss(rng);
    const double z = gauss(rng);
    return sigma * Vec3(x, y, z);
  };

  const SceneObject& goal = spec.scene[spec.target];
  HandState grasp = HandState::Flexion;
  switch (goal.affordance) {
    case Affordance::TopGrasp: grasp = HandState::Flexion; break;
    case Affordance::SideGrasp: grasp = HandState::Neutral; break;
    case Affordance::Both: {
      const bool flexion = std::bernoulli_distribution(0.5)(rng);
      grasp = spec.grasp.value_or(flexion ? HandState::Flexion : HandState::Neutral);
      break;
    }
  }
  const double grasp_gamma = grasp == HandState::Neutral ? spec.hand.neutral_gamma : spec.hand.flexion_gamma;

  const Vec3 start = spec.wrist_start;
  const Vec3 end = goal.position;
  const Vec3 reach = end - start;
  const Vec3 reach_dir = horizontal_unit(reach);
  const Vec3 lateral = Vec3::UnitZ().cross(reach_dir);
  const double amplitude = Vec3(reach.x(), reach.y(), 0.0).norm() * std::tan(signed_detour(spec)) / kPi;

  const Vec3 forward = spec.head_forward.normalized();
  // An inattentive head never turns away from where it started.
  const Vec3 gaze_goal = spec.variant == ReachVariant::InattentiveHead
                             ? forward
                             : Vec3((goal.position - spec.nose).normalized());

  const auto n_frames = static_cast<std::size_t>(std::llround(spec.duration * spec.fps)) + 1;
  Trajectory out;
  out.scene = spec.scene;
  out.label = spec.target;
  out.meta.fps = spec.fps;
  out.meta.subject = spec.subject;
  out.meta.source = TrajectorySource::Synthetic;
  out.meta.seed = spec.seed;
  out.meta.variant = std::string(to_string(spec.variant));
  out.frames.reserve(n_frames);

  for (std::size_t k = 0; k < n_frames; ++k) {
    const double tau = static_cast<double>(k) / static_cast<double>(n_frames - 1);
    const double s = min_jerk(tau);

    Observation obs;
    obs.t = static_cast<double>(k) / spec.fps;

    Vec3 wrist = (1.0 - s) * start + s * end;
    if (amplitude != 0.0) wrist += amplitude * std::sin(kPi * s) * lateral;

    const double gamma = spec.hand.rest_gamma +
                         (grasp_gamma - spec.hand.rest_gamma) * schedule(tau, spec.hand.onset, spec.hand.span);
    const Vec3 normal = std::cos(gamma) * Vec3::UnitZ() + std::sin(gamma) * lateral;
    const Vec3 across = normal.cross(reach_dir);

    Vec3 head = slerp(forward, gaze_goal, schedule(tau, spec.head_onset, spec.head_sweep));

    obs.nose = spec.nose + jitter(spec.sigma_p);
    obs.wrist = wrist + jitter(spec.sigma_p);
    obs.hand_points[0] = obs.wrist;
    obs.hand_points[1] = wrist + 0.08 * reach_dir + 0.02 * across + jitter(spec.sigma_p);
    obs.hand_points[2] = wrist + 0.07 * reach_dir - 0.05 * across + jitter(spec.sigma_p);
    if (spec.sigma_h > 0.0) head += jitter(spec.sigma_h);
    obs.head_dir = head.normalized();
    out.frames.push_back(obs);
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t index) {
  // splitmix64 finalizer over the combined key
  std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<Trajectory> generate_corpus(const Scene& scene, std::size_t per_target_count, std::uint64_t base_seed,
                                        const GenSpec& base) {
  if (per_target_count < 1) throw Error(ErrorCode::InvalidConfig, "per_target_count must be >= 1");
  if (scene.empty()) throw Error(ErrorCode::EmptyScene, "corpus scene is empty");
  const std::size_t n = scene.size();
  std::vector<Trajectory> corpus;
  corpus.reserve(n * per_target_count);
  // One reach in five is a variant, staggered per target so every target gets
  // its share and variants land on both sides of an interleaved split. The
  // variant kinds alternate globally between curved and inattentive.
  std::size_t variants = 0;
  for (std::size_t j = 0; j < n * per_target_count; ++j) {
    GenSpec spec = base;
    spec.scene = scene;
    spec.target = j % n;
    spec.seed = derive_seed(base_seed, j);
    spec.subject = "synthetic-" + std::to_string(j);
    spec.grasp.reset();
    spec.variant = ReachVariant::Straight;
    if ((j / n + spec.target) % 5 == 4) {
      if (variants++ % 2 == 0 || n < 2)
        spec.variant = (spec.seed & 1U) ? ReachVariant::CurvedClockwise : ReachVariant::CurvedCounterClockwise;
      else
        spec.variant = ReachVariant::InattentiveHead;
    }
    corpus.push_back(generate(spec));
  }
  return corpus;
}

// --- Trajectory files ----------------------------------------------------------

namespace {

[[noreturn]] void schema_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line) + ": " + what);
}

ordered_json vec_json(const Vec3& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

Vec3 parse_vec(const json& j, std::string_view field, std::size_t line) {
  if (!j.is_array() || j.size() != 3) schema_error(line, "'" + std::string(field) + "' must be an array of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) {
      schema_error(line, "'" + std::string(field) + "' must be an array of 3 numbers");
    }
    v[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  if (!v.allFinite()) schema_error(line, "'" + std::string(field) + "' is not finite");
  return v;
}

const json& require(const json& j, const char* key, std::size_t line) {
  const auto it = j.find(key);
  if (it == j.end()) schema_error(line, std::string("missing field '") + key + "'");
  return *it;
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed, std::size_t line) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) schema_error(line, "unknown field '" + key + "'");
  }
}

json parse_line(const std::string& text, std::size_t line) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) schema_error(line, "record must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + e.what());
  }
}

std::size_t as_index(const json& j, std::string_view field, std::size_t line) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    schema_error(line, "'" + std::string(field) + "' must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

TrajectoryHeader parse_header(const json& j, std::size_t line) {
  reject_unknown(j, {"schema_version", "scene", "label", "fps", "source", "seed", "subject", "variant"}, line);
  const json& version = require(j, "schema_version", line);
  if (!version.is_number_integer() || version.get<int>() != kTrajectorySchemaVersion) {
    schema_error(line, "unsupported schema_version");
  }
  TrajectoryHeader header;
  const json& scene = require(j, "scene", line);
  if (!scene.is_array() || scene.empty()) schema_error(line, "'scene' must be a non-empty array");
  for (const auto& object : scene) {
    if (!object.is_object()) schema_error(line, "scene entries must be objects");
    reject_unknown(object, {"id", "name", "position", "affordance"}, line);
    SceneObject o;
    o.id = as_index(require(object, "id", line), "id", line);
    const json& name = require(object, "name", line);
    if (!name.is_string()) schema_error(line, "object 'name' must be a string");
    o.name = name.get<std::string>();
    o.position = parse_vec(require(object, "position", line), "position", line);
    const json& affordance = require(object, "affordance", line);
    if (!affordance.is_string()) schema_error(line, "object 'affordance' must be a string");
    try {
      o.affordance = affordance_from_string(affordance.get<std::string>());
    } catch (const Error& e) {
      schema_error(line, e.what());
    }
    header.scene.objects.push_back(std::move(o));
  }
  try {
    header.scene.validate();
  } catch (const Error& e) {
    schema_error(line, e.what());
  }
  header.label = as_index(require(j, "label", line), "label", line);
  if (header.label >= header.scene.size()) schema_error(line, "label outside the scene");
  const json& fps = require(j, "fps", line);
  if (!fps.is_number() || !(fps.get<double>() > 0.0)) schema_error(line, "'fps' must be a positive number");
  header.meta.fps = fps.get<double>();
  const json& source = require(j, "source", line);
  if (!source.is_string()) schema_error(line, "'source' must be a string");
  try {
    header.meta.source = source_from_string(source.get<std::string>());
  } catch (const Error& e) {
    schema_error(line, e.what());
  }
  if (const auto it = j.find("seed"); it != j.end() && !it->is_null()) {
    if (!it->is_number_unsigned()) schema_error(line, "'seed' must be an unsigned integer");
    header.meta.seed = it->get<std::uint64_t>();
  }
  if (const auto it = j.find("subject"); it != j.end()) {
    if (!it->is_string()) schema_error(line, "'subject' must be a string");
    header.meta.subject = it->get<std::string>();
  }
  if (const auto it = j.find("variant"); it != j.end()) {
    if (!it->is_string()) schema_error(line, "'variant' must be a string");
    header.meta.variant = it->get<std::string>();
  }
  return header;
}

Observation parse_frame(const json& j, std::size_t line) {
  reject_unknown(j, {"t", "nose", "head_dir", "wrist", "hand_points"}, line);
  Observation obs;
  const json& t = require(j, "t", line);
  if (!t.is_number()) schema_error(line, "'t' must be a number");
  obs.t = t.get<double>();
  if (!std::isfinite(obs.t)) schema_error(line, "'t' is not finite");
  obs.nose = parse_vec(require(j, "nose", line), "nose", line);
  obs.head_dir = parse_vec(require(j, "head_dir", line), "head_dir", line);
  if (std::abs(obs.head_dir.norm() - 1.0) > 1e-6) schema_error(line, "'head_dir' is not unit length");
  obs.wrist = parse_vec(require(j, "wrist", line), "wrist", line);
  const json& hand = require(j, "hand_points", line);
  if (!hand.is_array() || hand.size() != 3) schema_error(line, "'hand_points' must hold exactly 3 points");
  for (std::size_t i = 0; i < 3; ++i) obs.hand_points[i] = parse_vec(hand[i], "hand_points", line);
  return obs;
}

bool next_content_line(std::istream& in, std::string& text, std::size_t& line) {
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

void write_trajectory(std::ostream& out, const Trajectory& trajectory) {
  ordered_json header;
  header["schema_version"] = kTrajectorySchemaVersion;
  ordered_json scene = ordered_json::array();
  for (const auto& object : trajectory.scene.objects) {
    ordered_json o;
    o["id"] = object.id;
    o["name"] = object.name;
    o["position"] = vec_json(object.position);
    o["affordance"] = to_string(object.affordance);
    scene.push_back(std::move(o));
  }
  header["scene"] = std::move(scene);
  header["label"] = trajectory.label;
  header["fps"] = trajectory.meta.fps;
  header["source"] = to_string(trajectory.meta.source);
  if (trajectory.meta.seed) header["seed"] = *trajectory.meta.seed;
  header["subject"] = trajectory.meta.subject;
  if (!trajectory.meta.variant.empty()) header["variant"] = trajectory.meta.variant;
  out << header.dump() << '\n';

  for (const auto& frame : trajectory.frames) {
    ordered_json f;
    f["t"] = frame.t;
    f["nose"] = vec_json(frame.nose);
    f["head_dir"] = vec_json(frame.head_dir);
    f["wrist"] = vec_json(frame.wrist);
    f["hand_points"] = ordered_json::array(
        {vec_json(frame.hand_points[0]), vec_json(frame.hand_points[1]), vec_json(frame.hand_points[2])});
    out << f.dump() << '\n';
  }
}

void save_trajectory(const std::filesystem::path& path, const Trajectory& trajectory) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  write_trajectory(out, trajectory);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

TrajectoryStreamReader::TrajectoryStreamReader(std::istream& in) : in_(in) {}

std::optional<TrajectoryHeader> TrajectoryStreamReader::read_header() {
  std::string text;
  if (!next_content_line(in_, text, line_)) return std::nullopt;
  return parse_header(parse_line(text, line_), line_);
}

std::optional<Observation> TrajectoryStreamReader::next() {
  std::string text;
  if (!next_content_line(in_, text, line_)) return std::nullopt;
  Observation obs = parse_frame(parse_line(text, line_), line_);
  if (last_t_ && !(obs.t > *last_t_)) schema_error(line_, "frame time does not increase");
  last_t_ = obs.t;
  return obs;
}

Trajectory read_trajectory(std::istream& in, TrajectoryHeader* header_out) {
  TrajectoryStreamReader reader(in);
  auto header = reader.read_header();
  if (!header) throw Error(ErrorCode::SchemaViolation, "line 1: missing header record");
  Trajectory trajectory;
  trajectory.scene = header->scene;
  trajectory.label = header->label;
  trajectory.meta = header->meta;
  while (auto frame = reader.next()) trajectory.frames.push_back(*frame);
  if (trajectory.frames.size() < 2) {
    schema_error(reader.line(), "a trajectory needs at least 2 frames, found " + std::to_string(trajectory.frames.size()));
  }
  trajectory.validate();
  if (header_out) *header_out = std::move(*header);
  return trajectory;
}

Trajectory load_trajectory(const std::filesystem::path& path, TrajectoryHeader* header_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return read_trajectory(in, header_out);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<Trajectory> load_trajectories(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) {
    std::vector<Trajectory> out;
    for (const auto& entry : read_manifest(path).entries) out.push_back(load_trajectory(path / entry.file));
    return out;
  }
  return {load_trajectory(path)};
}

// --- Corpora -------------------------------------------------------------------

Manifest write_corpus(const std::filesystem::path& dir, const std::vector<Trajectory>& trajectories,
                      double train_fraction) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "train fraction must lie in [0, 1]");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(trajectories.size())));
  Manifest manifest;
  ordered_json files = ordered_json::array();
  for (std::size_t j = 0; j < trajectories.size(); ++j) {
    const auto& trajectory = trajectories[j];
    char name[32];
    std::snprintf(name, sizeof(name), "traj_%03zu.jsonl", j);
    save_trajectory(dir / name, trajectory);
    ManifestEntry entry{name, trajectory.label, trajectory.scene[trajectory.label].name,
                        j < n_train ? Split::Train : Split::Eval, trajectory.meta.variant};
    ordered_json record;
    record["file"] = entry.file;
    record["label"] = entry.label;
    record["label_name"] = entry.label_name;
    record["split"] = entry.split == Split::Train ? "train" : "eval";
    if (!entry.variant.empty()) record["variant"] = entry.variant;
    files.push_back(std::move(record));
    manifest.entries.push_back(std::move(entry));
  }
  ordered_json doc;
  doc["schema_version"] = kTrajectorySchemaVersion;
  doc["files"] = std::move(files);
  std::ofstream out(dir / kManifestName, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + (dir / kManifestName).string());
  out << doc.dump(2) << '\n';
  return manifest;
}

Manifest read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / kManifestName;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open manifest " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  const auto fail = [&](const std::string& what) { throw Error(ErrorCode::SchemaViolation, path.string() + ": " + what); };
  if (!doc.is_object() || !doc.contains("files") || !doc["files"].is_array()) fail("manifest needs a 'files' array");
  Manifest manifest;
  try {
    for (const auto& record : doc["files"]) {
      if (!record.is_object() || !record.contains("file") || !record.contains("label") || !record.contains("split")) {
        fail("manifest entries need file, label and split");
      }
      ManifestEntry entry;
      entry.file = record["file"].get<std::string>();
      entry.label = record["label"].get<std::size_t>();
      entry.label_name = record.value("label_name", std::string());
      entry.variant = record.value("variant", std::string());
      const auto split = record["split"].get<std::string>();
      if (split == "train") entry.split = Split::Train;
      else if (split == "eval") entry.split = Split::Eval;
      else fail("unknown split '" + split + "'");
      manifest.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    fail(e.what());
  }
  return manifest;
}

std::vector<Trajectory> load_split(const std::filesystem::path& dir, Split split) {
  std::vector<Trajectory> out;
  for (const auto& entry : read_manifest(dir).entries) {
    if (entry.split != split) continue;
    Trajectory trajectory = load_trajectory(dir / entry.file);
    if (trajectory.label != entry.label) {
      throw Error(ErrorCode::SchemaViolation, entry.file + ": label disagrees with the manifest");
    }
    out.push_back(std::move(trajectory));
  }
  return out;
}

}  // namespace bi
