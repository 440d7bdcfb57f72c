#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bi/evidence.hpp"
#include "bi/trajectory.hpp"

namespace bi {

// --- Synthetic reaches -------------------------------------------------------

enum class ReachVariant { Straight, CurvedClockwise, CurvedCounterClockwise, InattentiveHead };

std::string_view to_string(ReachVariant variant);
ReachVariant variant_from_string(std::string_view name);

// Palm tilt over the reach: `rest` until `onset`, then a minimum-jerk blend
// into the grasp angle over `span` (fractions of the duration).
struct HandSchedule {
  double rest_gamma = deg2rad(80.0);
  double flexion_gamma = deg2rad(10.0);
  double neutral_gamma = deg2rad(45.0);
  double onset = 0.05;
  double span = 0.2;
};

struct GenSpec {
  Scene scene = default_scene();
  std::size_t target = 0;
  double duration = 1.5;                  // s
  double fps = 30.0;
  double sigma_p = 0.005;                 // m, per keypoint and frame
  double sigma_h = deg2rad(3.0);          // rad, head direction jitter
  double head_onset = 0.1;                // fraction of the duration
  double head_sweep = 0.3;                // fraction of the duration
  HandSchedule hand;
  // Grasp style for objects affording both; drawn from the seed when unset.
  std::optional<HandState> grasp;
  Vec3 wrist_start = Vec3(0.60, -0.25, 0.12);
  Vec3 nose = Vec3(0.0, -0.60, 0.45);
  Vec3 head_forward = Vec3(0.0, 0.60, -0.37);
  ReachVariant variant = ReachVariant::Straight;
  double detour_deg = 30.0;               // initial heading rotation of curved reaches
  std::uint64_t seed = 0;
  std::string subject = "synthetic";

  void validate() const;
};

// Minimum-jerk blend 10s^3 - 15s^4 + 6s^5, clamped to [0, 1].
double min_jerk(double s);

// Initial horizontal heading of the wrist for a spec (direction of the first
// instant of motion).
Vec3 initial_heading(const GenSpec& spec);

Trajectory generate(const GenSpec& spec);

// Per-trajectory seed derived from the corpus seed and trajectory index.
std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t index);

// per_target_count reaches per object, interleaved by target. One in five
// reaches per target is a variant, alternating between a curved detour and an
// inattentive head.
std::vector<Trajectory> generate_corpus(const Scene& scene, std::size_t per_target_count, std::uint64_t base_seed,
                                        const GenSpec& base = {});

// --- Trajectory files ----------------------------------------------------------

inline constexpr int kTrajectorySchemaVersion = 1;

struct TrajectoryHeader {
  Scene scene;
  std::size_t label = 0;
  TrajectoryMeta meta;
};

void write_trajectory(std::ostream& out, const Trajectory& trajectory);
void save_trajectory(const std::filesystem::path& path, const Trajectory& trajectory);

Trajectory read_trajectory(std::istream& in, TrajectoryHeader* header_out = nullptr);
Trajectory load_trajectory(const std::filesystem::path& path, TrajectoryHeader* header_out = nullptr);

// A single file, or every trajectory listed in a corpus manifest.
std::vector<Trajectory> load_trajectories(const std::filesystem::path& path);

// Frame-at-a-time reader for streams: header first, then frames.
class TrajectoryStreamReader {
 public:
  explicit TrajectoryStreamReader(std::istream& in);

  // Reads the header line; nullopt on an empty stream.
  std::optional<TrajectoryHeader> read_header();
  // Next frame, validated against the previous one; nullopt at end of stream.
  std::optional<Observation> next();

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::optional<double> last_t_;
};

// --- Corpora -------------------------------------------------------------------

enum class Split { Train, Eval };

struct ManifestEntry {
  std::string file;
  std::size_t label = 0;
  std::string label_name;
  Split split = Split::Train;
  std::string variant;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
};

inline constexpr std::string_view kManifestName = "manifest.json";

// First round(train_fraction * size) trajectories go to the train split.
Manifest write_corpus(const std::filesystem::path& dir, const std::vector<Trajectory>& trajectories,
                      double train_fraction = 2.0 / 3.0);

Manifest read_manifest(const std::filesystem::path& dir);

std::vector<Trajectory> load_split(const std::filesystem::path& dir, Split split);

}  // namespace bi
