#include "bi/commands.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>

#include <json.hpp>

#include "bi/error.hpp"

namespace bi::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json vec_json(const Vec3& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

ordered_json ellipsoid_json(const VirtualEllipsoid& e, const SphereParams& spheres) {
  ordered_json j;
  j["center"] = vec_json(e.center);
  j["semi_axes"] = ordered_json::array({e.a, e.b, e.c_axis});
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(ordered_json::array({e.rotation(r, 0), e.rotation(r, 1), e.rotation(r, 2)}));
  j["rotation"] = std::move(rows);
  ordered_json set = ordered_json::array();
  for (const auto& s : to_spheres(e, spheres)) set.push_back({{"center", vec_json(s.center)}, {"radius", s.radius}});
  j["spheres"] = std::move(set);
  return j;
}

std::string object_of(const TaskSequence& initial, const Scene& scene, const std::string& id) {
  for (const auto& s : initial.subtasks()) {
    if (s.id == id) return scene[s.object].name;
  }
  return {};
}

ordered_json event_json(const PlanEvent& event, const TaskSequence& initial, const Scene& scene,
                        const SphereParams& spheres) {
  ordered_json j;
  j["kind"] = to_string(event.kind);
  j["t"] = event.t;
  if (const auto* id = std::get_if<std::string>(&event.payload)) {
    j["subtask"] = *id;
    j["object"] = object_of(initial, scene, *id);
  } else if (const auto* blocked = std::get_if<BlockedPath>(&event.payload)) {
    j["subtask"] = blocked->subtask;
    j["object"] = object_of(initial, scene, blocked->subtask);
    j["waypoint"] = blocked->waypoint;
  } else if (const auto* e = std::get_if<VirtualEllipsoid>(&event.payload)) {
    j["ellipsoid"] = ellipsoid_json(*e, spheres);
  }
  return j;
}

std::vector<std::string> class_names(const Scene& scene) {
  std::vector<std::string> names;
  for (const auto& o : scene.objects) names.push_back(o.name);
  return names;
}

}  // namespace

Cpt load_cpt(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open CPT " + path.string());
  try {
    return Cpt::read(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void save_cpt(const std::filesystem::path& path, const Cpt& cpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write CPT " + path.string());
  cpt.write(out);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Manifest cmd_gen(const Config& config, const GenOptions& options, std::ostream& log) {
  const std::size_t per_target = options.per_target_count.value_or(config.per_target_count);
  const std::uint64_t seed = options.seed.value_or(config.seed);
  const GenSpec base = config.gen_spec();
  const auto corpus = generate_corpus(base.scene, per_target, seed, base);
  Manifest manifest = write_corpus(options.out_dir, corpus, config.train_fraction);
  std::size_t train = 0;
  for (const auto& entry : manifest.entries) train += entry.split == Split::Train ? 1 : 0;
  log << "wrote " << corpus.size() << " trajectories (" << train << " train, " << corpus.size() - train
      << " eval) to " << options.out_dir.string() << '\n';
  return manifest;
}

Cpt cmd_train(const Config& config, const TrainOptions& options, std::ostream& log) {
  const auto train = load_split(options.corpus_dir, Split::Train);
  if (train.empty()) throw Error(ErrorCode::EmptyDataset, "train split of " + options.corpus_dir.string() + " is empty");
  Cpt cpt = learn_cpt(train, config.predictor_config());
  save_cpt(options.out_cpt, cpt);

  std::size_t frames = 0;
  for (const auto& t : train) frames += t.frames.size();
  char coverage[32];
  std::snprintf(coverage, sizeof(coverage), "%.1f", 100.0 * cpt.coverage());
  log << "learned " << to_string(cpt.kind()) << " CPT from " << train.size() << " trajectories (" << frames
      << " frames); combination coverage " << coverage << "% of " << cpt.n_combos() << '\n';
  log << "frames per target:";
  for (std::size_t i = 0; i < cpt.n_objects(); ++i) log << ' ' << train.front().scene[i].name << '=' << cpt.target_total(i);
  log << '\n';
  return cpt;
}

std::size_t cmd_predict(const Config& config, const PredictOptions& options, std::istream& in, std::ostream& out) {
  auto cpt = std::make_shared<const Cpt>(load_cpt(options.cpt_path));
  TrajectoryStreamReader reader(in);
  const auto header = reader.read_header();
  if (!header) return 0;
  if (header->scene.size() != cpt->n_objects()) {
    throw Error(ErrorCode::CptMismatch, "stream scene has " + std::to_string(header->scene.size()) +
                                            " objects, CPT expects " + std::to_string(cpt->n_objects()));
  }
  Predictor predictor(cpt, config.predictor_config());
  std::size_t frames = 0;
  while (auto frame = reader.next()) {
    const StepResult result = predictor.step(*frame, header->scene);
    ordered_json record;
    record["t"] = frame->t;
    record["belief"] = result.belief.probs;
    record["predicted"] = result.predicted;
    if (options.include_latency) record["latency"] = result.latency_s;
    out << record.dump() << '\n';
    if (options.flush_each_line) out.flush();
    ++frames;
  }
  return frames;
}

std::vector<EvalResult> cmd_eval(const Config& config, const EvalOptionsCli& options, std::ostream& out) {
  const Cpt cpt = load_cpt(options.cpt_path);
  const auto eval_set = load_split(options.corpus_dir, Split::Eval);
  if (eval_set.empty()) throw Error(ErrorCode::EmptyEvalSet, "eval split of " + options.corpus_dir.string() + " is empty");
  const auto names = class_names(eval_set.front().scene);

  std::vector<EvalResult> results;
  std::vector<MetricsReport> reports;
  for (const BaselineKind kind : options.baselines) {
    results.push_back(run_eval(cpt, eval_set, kind, config.predictor_config(), EvalOptions{options.final_frame_only}));
    reports.push_back(results.back().report);
  }

  if (options.json) {
    for (const auto& report : reports) write_metrics_json(out, report, names, options.include_latency);
  } else {
    write_metrics_table(out, reports);
  }

  if (options.confusion_csv) {
    for (const auto& result : results) {
      std::filesystem::path path = *options.confusion_csv;
      if (results.size() > 1) {
        path.replace_filename(path.stem().string() + "_" + std::string(to_string(result.report.kind)) +
                              path.extension().string());
      }
      std::ofstream csv(path, std::ios::binary);
      if (!csv) throw Error(ErrorCode::Io, "cannot write " + path.string());
      result.confusion.write_csv(csv, names);
    }
  }
  return results;
}

SimLog simulate(const Cpt& cpt, const Scenario& scenario, const Config& config) {
  GenSpec spec = config.gen_spec();
  SimLog log;
  log.scene = spec.scene;
  if (cpt.n_objects() != log.scene.size()) {
    throw Error(ErrorCode::CptMismatch, "simulation scene and CPT disagree on the number of objects");
  }

  std::vector<Subtask> subtasks;
  for (std::size_t k = 0; k < scenario.sequence.size(); ++k) {
    const auto object = log.scene.find(scenario.sequence[k]);
    if (!object) throw Error(ErrorCode::InvalidConfig, "scenario names unknown object '" + scenario.sequence[k] + "'");
    subtasks.push_back(Subtask{"s" + std::to_string(k + 1), *object});
  }
  log.initial = TaskSequence(std::move(subtasks));
  ReplanSession session(log.initial, log.scene, config.replan_config());

  if (scenario.target) {
    const auto target = log.scene.find(*scenario.target);
    if (!target) throw Error(ErrorCode::InvalidConfig, "scenario target '" + *scenario.target + "' is not in the scene");
    spec.target = *target;
    spec.seed = scenario.seed;
    spec.variant = scenario.variant;
    spec.subject = "simulated";
    const Trajectory human = generate(spec);

    Predictor predictor(std::make_shared<const Cpt>(cpt), config.predictor_config());
    double next_completion = config.robot_task_duration;
    for (const auto& frame : human.frames) {
      const StepResult step = predictor.step(frame, human.scene);
      SimRecord record;
      record.t = frame.t;
      record.belief = step.belief;
      record.predicted = step.predicted;
      record.latency_s = step.latency_s;

      ReplanOutcome outcome =
          session.on_frame(frame.t, frame.wrist, Prediction{step.predicted, step.belief.probs[step.predicted]});
      record.committed = outcome.committed;
      record.ellipsoid = outcome.obstacle;
      record.events = std::move(outcome.events);
      // The robot treats a consumed prediction as the human moving on.
      if (outcome.committed) predictor.reset_belief();
      while (frame.t >= next_completion) {
        if (auto done = session.complete_current(frame.t)) record.events.push_back(std::move(*done));
        next_completion += config.robot_task_duration;
      }
      log.records.push_back(std::move(record));
    }
  }
  log.final_sequence = session.sequence();
  return log;
}

void write_sim_log(std::ostream& out, const SimLog& log, const Config& config, bool include_latency) {
  const SphereParams spheres = config.sphere_params();
  for (const auto& record : log.records) {
    ordered_json j;
    j["t"] = record.t;
    j["belief"] = record.belief.probs;
    j["predicted"] = log.scene[record.predicted].name;
    j["committed"] = record.committed ? ordered_json(log.scene[*record.committed].name) : ordered_json(nullptr);
    j["ellipsoid"] = record.ellipsoid ? ellipsoid_json(*record.ellipsoid, spheres) : ordered_json(nullptr);
    ordered_json events = ordered_json::array();
    for (const auto& event : record.events) events.push_back(event_json(event, log.initial, log.scene, spheres));
    j["events"] = std::move(events);
    if (include_latency) j["latency"] = record.latency_s;
    out << j.dump() << '\n';
  }
  ordered_json summary;
  ordered_json remaining = ordered_json::array();
  for (const auto& s : log.final_sequence.subtasks()) {
    remaining.push_back({{"subtask", s.id}, {"object", log.scene[s.object].name}});
  }
  summary["final_sequence"] = std::move(remaining);
  summary["completed"] = log.final_sequence.cursor();
  out << ordered_json{{"summary", std::move(summary)}}.dump() << '\n';
}

SimLog cmd_simulate(const Config& config, const SimulateOptions& options, std::ostream& out) {
  const Cpt cpt = load_cpt(options.cpt_path);
  SimLog log = simulate(cpt, options.scenario, config);
  if (options.out_log) {
    std::ofstream file(*options.out_log, std::ios::binary);
    if (!file) throw Error(ErrorCode::Io, "cannot write " + options.out_log->string());
    write_sim_log(file, log, config, options.include_latency);
  } else {
    write_sim_log(out, log, config, options.include_latency);
  }
  return log;
}

}  // namespace bi::cli
