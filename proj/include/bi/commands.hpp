#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bi/config.hpp"
#include "bi/eval.hpp"
#include "bi/taskplan.hpp"

// Subcommand bodies behind the `bi` executable. Each takes explicit streams
// so tests can drive them without a process boundary.
namespace bi::cli {

struct GenOptions {
  std::filesystem::path out_dir;
  std::optional<std::size_t> per_target_count;
  std::optional<std::uint64_t> seed;
};
Manifest cmd_gen(const Config& config, const GenOptions& options, std::ostream& log);

struct TrainOptions {
  std::filesystem::path corpus_dir;
  std::filesystem::path out_cpt;
};
Cpt cmd_train(const Config& config, const TrainOptions& options, std::ostream& log);

struct PredictOptions {
  std::filesystem::path cpt_path;
  bool flush_each_line = false;
  bool include_latency = true;
};
// Reads a header record then frame records from `in`; writes one record per
// frame. Returns the number of frames processed.
std::size_t cmd_predict(const Config& config, const PredictOptions& options, std::istream& in, std::ostream& out);

struct EvalOptionsCli {
  std::filesystem::path cpt_path;
  std::filesystem::path corpus_dir;
  std::vector<BaselineKind> baselines{BaselineKind::FullBI};
  std::optional<std::filesystem::path> confusion_csv;
  bool json = false;
  bool include_latency = true;
  bool final_frame_only = false;
};
std::vector<EvalResult> cmd_eval(const Config& config, const EvalOptionsCli& options, std::ostream& out);

struct Scenario {
  std::optional<std::string> target;  // object the human reaches for; none = no human
  std::vector<std::string> sequence{"milk", "banana", "cereal"};
  std::uint64_t seed = 1;
  ReachVariant variant = ReachVariant::Straight;
};

struct SimRecord {
  double t = 0.0;
  Belief belief;
  std::size_t predicted = 0;
  std::optional<std::size_t> committed;
  std::optional<VirtualEllipsoid> ellipsoid;
  std::vector<PlanEvent> events;
  double latency_s = 0.0;
};

struct SimLog {
  Scene scene;
  TaskSequence initial;
  TaskSequence final_sequence;
  std::vector<SimRecord> records;
};

SimLog simulate(const Cpt& cpt, const Scenario& scenario, const Config& config);
void write_sim_log(std::ostream& out, const SimLog& log, const Config& config, bool include_latency = true);

struct SimulateOptions {
  std::filesystem::path cpt_path;
  Scenario scenario;
  std::optional<std::filesystem::path> out_log;
  bool include_latency = true;
};
SimLog cmd_simulate(const Config& config, const SimulateOptions& options, std::ostream& out);

Cpt load_cpt(const std::filesystem::path& path);
void save_cpt(const std::filesystem::path& path, const Cpt& cpt);

}  // namespace bi::cli
