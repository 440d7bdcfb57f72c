#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bi/inference.hpp"

namespace bi {

// Rows are ground truth, columns predictions.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t n_classes = 0);

  std::size_t size() const { return n_; }
  void add(std::size_t truth, std::size_t predicted, std::uint64_t count = 1);
  std::uint64_t at(std::size_t truth, std::size_t predicted) const { return counts_[truth * n_ + predicted]; }
  std::uint64_t row_sum(std::size_t truth) const;
  std::uint64_t col_sum(std::size_t predicted) const;
  std::uint64_t trace() const;
  std::uint64_t total() const;

  ConfusionMatrix& merge(const ConfusionMatrix& other);

  // Header row and column carry the class names.
  void write_csv(std::ostream& out, std::span<const std::string> class_names) const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> counts_;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
};

struct MetricsReport {
  BaselineKind kind = BaselineKind::FullBI;
  double weighted_accuracy = 0.0;
  double weighted_precision = 0.0;
  double weighted_f1 = 0.0;
  std::vector<ClassMetrics> per_class;
  double latency_mean_s = 0.0;
  double latency_p95_s = 0.0;
  std::uint64_t frames = 0;
};

// Support-weighted metrics; classes never predicted get precision 0.
MetricsReport compute_metrics(const ConfusionMatrix& confusion);

std::string_view method_label(BaselineKind kind);

// Keeps only the node(s) of `kind`; dropped nodes are reset to their defaults
// (head 0, no motion, hand Other).
DiscreteEvidence restrict_modality(const DiscreteEvidence& e, BaselineKind kind);

struct EvalOptions {
  bool final_frame_only = false;
};

struct EvalResult {
  ConfusionMatrix confusion;
  MetricsReport report;
};

// Runs a fresh predictor over every trajectory frame by frame. The first
// frame of a trajectory updates the belief but is not scored. A FullBI CPT
// is projected when a single-modality baseline is requested.
EvalResult run_eval(const Cpt& cpt, std::span<const Trajectory> trajectories, BaselineKind baseline,
                    const PredictorConfig& config, const EvalOptions& options = {});

// Per-frame output of one fresh predictor over a whole trajectory.
std::vector<StepResult> predict_trajectory(const std::shared_ptr<const Cpt>& cpt, const Trajectory& trajectory,
                                           const PredictorConfig& config);

struct LatencyStats {
  double mean_s = 0.0;
  double p95_s = 0.0;
  std::size_t frames = 0;
};

// Wall-clock step() time per frame over `repetitions` passes; the first pass
// is a warm-up and is discarded (so at least two passes run).
LatencyStats measure_latency(Predictor& predictor, const Trajectory& trajectory, std::size_t repetitions);

double percentile(std::vector<double> values, double q);

void write_metrics_table(std::ostream& out, std::span<const MetricsReport> reports);
// One JSON object per line; latency goes under a separate "latency" key
// unless omitted.
void write_metrics_json(std::ostream& out, const MetricsReport& report, std::span<const std::string> class_names,
                        bool include_latency = true);

}  // namespace bi
