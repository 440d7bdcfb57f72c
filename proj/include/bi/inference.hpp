#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "bi/evidence.hpp"
#include "bi/trajectory.hpp"

namespace bi {

struct PredictorConfig {
  EvidenceConfig evidence;
  double smoothing_alpha = 1.0;   // Laplace pseudo-count per combination
  double forgetting = 0.0;        // lambda: mixes 1/n into the prior; 0 = plain recursion
  std::size_t hysteresis_k = 5;   // consecutive identical predictions before a commit
  double commit_threshold = 0.7;  // posterior needed to commit

  // n_objects = 0 skips the checks that depend on the scene size.
  void validate(std::size_t n_objects = 0) const;
};

// Conditional probability table P(e | T = o_i) over a (possibly projected)
// evidence space. Stores raw counts so tables can be merged, projected or
// re-smoothed; likelihoods are laid out combination-major so one update reads
// one contiguous row of n values.
class Cpt {
 public:
  Cpt(std::size_t n_objects, BaselineKind kind, double alpha, const EvidenceConfig& evidence,
      std::vector<std::uint64_t> counts);

  // Likelihoods are taken as given (must be positive-or-zero and sum to 1 per
  // target); counts are left at zero. Used for hand-specified tables.
  static Cpt from_likelihoods(std::size_t n_objects, BaselineKind kind, const EvidenceConfig& evidence,
                              std::vector<double> likelihood);

  std::size_t n_objects() const { return n_objects_; }
  std::size_t n_combos() const { return n_combos_; }
  BaselineKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const EvidenceConfig& evidence_config() const { return evidence_; }

  double likelihood(std::size_t combo, std::size_t target) const {
    return likelihood_[combo * n_objects_ + target];
  }
  std::span<const double> likelihood_row(std::size_t combo) const {
    return {likelihood_.data() + combo * n_objects_, n_objects_};
  }
  std::uint64_t count(std::size_t combo, std::size_t target) const { return counts_[combo * n_objects_ + target]; }
  std::uint64_t target_total(std::size_t target) const;
  std::span<const std::uint64_t> counts() const { return counts_; }

  std::size_t combo_index(const DiscreteEvidence& e) const { return evidence_index(e, n_objects_, kind_); }

  // Fraction of combinations observed at least once for some target.
  double coverage() const;

  // P(T = o_i | e) from the raw counts, for diagnostics. Uniform when e was
  // never observed.
  std::vector<double> target_posterior(std::size_t combo) const;

  // Marginalizes the FullBI counts onto a single-modality space and
  // re-smooths with the same alpha.
  Cpt project(BaselineKind kind) const;

  // Self-describing text format; counts round-trip exactly, likelihoods are
  // written in shortest round-trip decimal form.
  void write(std::ostream& out) const;
  static Cpt read(std::istream& in);

  bool operator==(const Cpt&) const = default;

 private:
  Cpt() = default;
  void recompute_likelihoods();

  std::size_t n_objects_ = 0;
  std::size_t n_combos_ = 0;
  BaselineKind kind_ = BaselineKind::FullBI;
  double alpha_ = 1.0;
  EvidenceConfig evidence_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> likelihood_;
};

// Accumulates (evidence, label) observations into counts.
class CptBuilder {
 public:
  CptBuilder(std::size_t n_objects, BaselineKind kind, const EvidenceConfig& evidence);

  void add(const DiscreteEvidence& e, std::size_t label);
  void add_index(std::size_t combo, std::size_t label);
  Cpt build(double alpha) const;

  std::size_t n_objects() const { return n_objects_; }

 private:
  std::size_t n_objects_;
  BaselineKind kind_;
  EvidenceConfig evidence_;
  std::vector<std::uint64_t> counts_;
};

// Counts every frame of every trajectory under its ground-truth label.
Cpt learn_cpt(std::span<const Trajectory> trajectories, const PredictorConfig& config,
              BaselineKind kind = BaselineKind::FullBI);

struct Belief {
  std::vector<double> probs;
  std::size_t t = 0;
};

Belief init_belief(std::size_t n_objects);

// One recursion step: prior = (1 - lambda) * belief + lambda / n, posterior
// proportional to P(e | T_i) * prior_i.
Belief update(const Belief& belief, std::span<const double> likelihoods, double forgetting = 0.0);
Belief update(const Belief& belief, const DiscreteEvidence& e, const Cpt& cpt, double forgetting = 0.0);

// argmax with ties going to the lowest index.
std::size_t predict(const Belief& belief);

struct StepResult {
  Belief belief;
  std::size_t predicted = 0;
  DiscreteEvidence evidence;
  double latency_s = 0.0;
};

// Online filter for one stream. Single owner; the Cpt may be shared.
class Predictor {
 public:
  Predictor(std::shared_ptr<const Cpt> cpt, const PredictorConfig& config);

  // Feature extraction, discretization, Bayes update and argmax for one
  // frame. The latency covers that whole chain.
  StepResult step(const Observation& obs, const Scene& scene);

  // Back to the uniform prior; the velocity history is kept.
  void reset_belief();
  // Fresh stream: uniform prior and no velocity history.
  void reset();

  const Belief& belief() const { return belief_; }
  const Cpt& cpt() const { return *cpt_; }
  const PredictorConfig& config() const { return config_; }

 private:
  std::shared_ptr<const Cpt> cpt_;
  PredictorConfig config_;
  EvidenceExtractor extractor_;
  Belief belief_;
};

}  // namespace bi
