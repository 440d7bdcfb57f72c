#include "bi/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "bi/error.hpp"

namespace bi {

ConfusionMatrix::ConfusionMatrix(std::size_t n_classes) : n_(n_classes), counts_(n_classes * n_classes, 0) {}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted, std::uint64_t count) {
  if (truth >= n_ || predicted >= n_) throw Error(ErrorCode::InconsistentSceneSize, "class index outside confusion matrix");
  counts_[truth * n_ + predicted] += count;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::uint64_t sum = 0;
  for (std::size_t j = 0; j < n_; ++j) sum += at(truth, j);
  return sum;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t predicted) const {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < n_; ++i) sum += at(i, predicted);
  return sum;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < n_; ++i) sum += at(i, i);
  return sum;
}

std::uint64_t ConfusionMatrix::total() const { return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0}); }

ConfusionMatrix& ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.n_ != n_) throw Error(ErrorCode::InconsistentSceneSize, "merging confusion matrices of different sizes");
  for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
  return *this;
}

void ConfusionMatrix::write_csv(std::ostream& out, std::span<const std::string> class_names) const {
  if (class_names.size() != n_) throw Error(ErrorCode::InconsistentSceneSize, "class name count differs from matrix size");
  out << "truth\\predicted";
  for (const auto& name : class_names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < n_; ++i) {
    out << class_names[i];
    for (std::size_t j = 0; j < n_; ++j) out << ',' << at(i, j);
    out << '\n';
  }
}

MetricsReport compute_metrics(const ConfusionMatrix& confusion) {
  MetricsReport report;
  const std::size_t n = confusion.size();
  const std::uint64_t total = confusion.total();
  report.frames = total;
  report.per_class.resize(n);
  if (total == 0) return report;
  for (std::size_t c = 0; c < n; ++c) {
    ClassMetrics& m = report.per_class[c];
    const auto tp = static_cast<double>(confusion.at(c, c));
    const auto predicted = static_cast<double>(confusion.col_sum(c));
    m.support = confusion.row_sum(c);
    m.precision = predicted > 0.0 ? tp / predicted : 0.0;
    m.recall = m.support > 0 ? tp / static_cast<double>(m.support) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    const double weight = static_cast<double>(m.support) / static_cast<double>(total);
    report.weighted_precision += weight * m.precision;
    report.weighted_f1 += weight * m.f1;
  }
  report.weighted_accuracy = static_cast<double>(confusion.trace()) / static_cast<double>(total);
  return report;
}

std::string_view method_label(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::HeadOnly: return "Head Baseline";
    case BaselineKind::HandOrientationOnly: return "Hand Orientation Baseline";
    case BaselineKind::HandVelocityOnly: return "Hand Velocity Baseline";
    case BaselineKind::FullBI: return "Bayesian Intention";
  }
  return "Bayesian Intention";
}

DiscreteEvidence restrict_modality(const DiscreteEvidence& e, BaselineKind kind) {
  DiscreteEvidence out;
  switch (kind) {
    case BaselineKind::FullBI: return e;
    case BaselineKind::HeadOnly: out.head_target = e.head_target; break;
    case BaselineKind::HandOrientationOnly: out.hand_state = e.hand_state; break;
    case BaselineKind::HandVelocityOnly: out.motion_target = e.motion_target; break;
  }
  return out;
}

std::vector<StepResult> predict_trajectory(const std::shared_ptr<const Cpt>& cpt, const Trajectory& trajectory,
                                           const PredictorConfig& config) {
  Predictor predictor(cpt, config);
  std::vector<StepResult> steps;
  steps.reserve(trajectory.frames.size());
  for (const auto& frame : trajectory.frames) steps.push_back(predictor.step(frame, trajectory.scene));
  return steps;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double rank = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = static_cast<std::size_t>(std::ceil(rank));
  return values[lo] + (rank - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

EvalResult run_eval(const Cpt& cpt, std::span<const Trajectory> trajectories, BaselineKind baseline,
                    const PredictorConfig& config, const EvalOptions& options) {
  if (trajectories.empty()) throw Error(ErrorCode::EmptyEvalSet, "no evaluation trajectories");
  std::shared_ptr<const Cpt> model;
  if (cpt.kind() == baseline) {
    model = std::make_shared<const Cpt>(cpt);
  } else if (cpt.kind() == BaselineKind::FullBI) {
    model = std::make_shared<const Cpt>(cpt.project(baseline));
  } else {
    throw Error(ErrorCode::CptMismatch, "a " + std::string(to_string(cpt.kind())) + " CPT cannot evaluate the " +
                                            std::string(to_string(baseline)) + " baseline");
  }

  const std::size_t n = cpt.n_objects();
  ConfusionMatrix confusion(n);
  std::vector<double> latencies;
  for (const auto& trajectory : trajectories) {
    if (trajectory.scene.size() != n) {
      throw Error(ErrorCode::CptMismatch, "trajectory scene has " + std::to_string(trajectory.scene.size()) +
                                              " objects, CPT expects " + std::to_string(n));
    }
    const auto steps = predict_trajectory(model, trajectory, config);
    for (std::size_t k = 1; k < steps.size(); ++k) {
      latencies.push_back(steps[k].latency_s);
      if (options.final_frame_only && k + 1 != steps.size()) continue;
      confusion.add(trajectory.label, steps[k].predicted);
    }
  }

  EvalResult result{confusion, compute_metrics(confusion)};
  result.report.kind = baseline;
  if (!latencies.empty()) {
    result.report.latency_mean_s = std::accumulate(latencies.begin(), latencies.end(), 0.0) /
                                   static_cast<double>(latencies.size());
    result.report.latency_p95_s = percentile(std::move(latencies), 0.95);
  }
  return result;
}

LatencyStats measure_latency(Predictor& predictor, const Trajectory& trajectory, std::size_t repetitions) {
  if (repetitions < 1) throw Error(ErrorCode::InvalidConfig, "latency measurement needs at least one repetition");
  std::vector<double> samples;
  samples.reserve(repetitions * trajectory.frames.size());
  for (std::size_t r = 0; r <= repetitions; ++r) {
    predictor.reset();
    for (const auto& frame : trajectory.frames) {
      const double latency = predictor.step(frame, trajectory.scene).latency_s;
      if (r > 0) samples.push_back(latency);
    }
  }
  LatencyStats stats;
  stats.frames = samples.size();
  stats.mean_s = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
  stats.p95_s = percentile(std::move(samples), 0.95);
  return stats;
}

void write_metrics_table(std::ostream& out, std::span<const MetricsReport> reports) {
  char line[160];
  std::snprintf(line, sizeof(line), "%-28s %9s %10s %9s\n", "Method", "Accuracy", "Precision", "F1 Score");
  out << line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof(line), "%-28s %9.2f %10.2f %9.2f\n", std::string(method_label(r.kind)).c_str(),
                  100.0 * r.weighted_accuracy, 100.0 * r.weighted_precision, 100.0 * r.weighted_f1);
    out << line;
  }
}

void write_metrics_json(std::ostream& out, const MetricsReport& report, std::span<const std::string> class_names,
                        bool include_latency) {
  nlohmann::ordered_json j;
  j["method"] = to_string(report.kind);
  j["weighted_accuracy"] = report.weighted_accuracy;
  j["weighted_precision"] = report.weighted_precision;
  j["weighted_f1"] = report.weighted_f1;
  j["frames"] = report.frames;
  auto per_class = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& m = report.per_class[c];
    nlohmann::ordered_json row;
    row["class"] = c < class_names.size() ? class_names[c] : std::to_string(c);
    row["precision"] = m.precision;
    row["recall"] = m.recall;
    row["f1"] = m.f1;
    row["support"] = m.support;
    per_class.push_back(std::move(row));
  }
  j["per_class"] = std::move(per_class);
  if (include_latency) j["latency"] = {{"mean_s", report.latency_mean_s}, {"p95_s", report.latency_p95_s}};
  out << j.dump() << '\n';
}

}  // namespace bi
