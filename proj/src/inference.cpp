#include "bi/inference.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "bi/error.hpp"

namespace bi {
namespace {

constexpr std::string_view kCptMagic = "bi-cpt";
constexpr int kCptVersion = 1;

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

double parse_double(std::string_view text, std::size_t line) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad number '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_uint(std::string_view text, std::size_t line) {
  std::uint64_t value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad integer '" + std::string(text) + "'");
  }
  return value;
}

bool keeps_head(BaselineKind kind) { return kind == BaselineKind::FullBI || kind == BaselineKind::HeadOnly; }
bool keeps_motion(BaselineKind kind) { return kind == BaselineKind::FullBI || kind == BaselineKind::HandVelocityOnly; }
bool keeps_hand(BaselineKind kind) {
  return kind == BaselineKind::FullBI || kind == BaselineKind::HandOrientationOnly;
}

}  // namespace

void PredictorConfig::validate(std::size_t n_objects) const {
  evidence.validate();
  if (!(smoothing_alpha >= 0.0) || !std::isfinite(smoothing_alpha)) {
    throw Error(ErrorCode::InvalidConfig, "smoothing alpha must be finite and >= 0");
  }
  if (!(forgetting >= 0.0 && forgetting <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "forgetting lambda must lie in [0, 1]");
  }
  if (hysteresis_k < 1) throw Error(ErrorCode::InvalidConfig, "hysteresis_k must be >= 1");
  if (!(commit_threshold > 0.0) || !std::isfinite(commit_threshold)) {
    throw Error(ErrorCode::InvalidConfig, "commit threshold must be positive");
  }
  if (n_objects > 0 && !(commit_threshold > 1.0 / static_cast<double>(n_objects))) {
    throw Error(ErrorCode::InvalidConfig, "commit threshold must exceed 1/n");
  }
}

// --- Cpt -------------------------------------------------------------------

Cpt::Cpt(std::size_t n_objects, BaselineKind kind, double alpha, const EvidenceConfig& evidence,
         std::vector<std::uint64_t> counts)
    : n_objects_(n_objects),
      n_combos_(evidence_space_size(n_objects, kind)),
      kind_(kind),
      alpha_(alpha),
      evidence_(evidence),
      counts_(std::move(counts)) {
  if (n_objects_ == 0) throw Error(ErrorCode::EmptyScene, "a CPT needs at least one target");
  if (!(alpha_ >= 0.0) || !std::isfinite(alpha_)) {
    throw Error(ErrorCode::InvalidConfig, "smoothing alpha must be finite and >= 0");
  }
  if (counts_.size() != n_combos_ * n_objects_) {
    throw Error(ErrorCode::InconsistentSceneSize, "count table has " + std::to_string(counts_.size()) +
                                                      " cells, expected " + std::to_string(n_combos_ * n_objects_));
  }
  recompute_likelihoods();
}

Cpt Cpt::from_likelihoods(std::size_t n_objects, BaselineKind kind, const EvidenceConfig& evidence,
                          std::vector<double> likelihood) {
  Cpt cpt(n_objects, kind, 0.0, evidence,
          std::vector<std::uint64_t>(evidence_space_size(n_objects, kind) * n_objects, 0));
  if (likelihood.size() != cpt.likelihood_.size()) {
    throw Error(ErrorCode::InconsistentSceneSize, "likelihood table has the wrong number of cells");
  }
  for (std::size_t i = 0; i < n_objects; ++i) {
    double total = 0.0;
    for (std::size_t e = 0; e < cpt.n_combos_; ++e) {
      const double p = likelihood[e * n_objects + i];
      if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidConfig, "likelihood outside [0, 1]");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw Error(ErrorCode::InvalidConfig, "likelihood column " + std::to_string(i) + " does not sum to 1");
    }
  }
  cpt.likelihood_ = std::move(likelihood);
  return cpt;
}

void Cpt::recompute_likelihoods() {
  likelihood_.assign(counts_.size(), 0.0);
  for (std::size_t i = 0; i < n_objects_; ++i) {
    const auto total = static_cast<double>(target_total(i));
    const double denominator = total + alpha_ * static_cast<double>(n_combos_);
    for (std::size_t e = 0; e < n_combos_; ++e) {
      const std::size_t cell = e * n_objects_ + i;
      likelihood_[cell] = denominator > 0.0
                              ? (static_cast<double>(counts_[cell]) + alpha_) / denominator
                              : 1.0 / static_cast<double>(n_combos_);
    }
  }
}

std::uint64_t Cpt::target_total(std::size_t target) const {
  std::uint64_t total = 0;
  for (std::size_t e = 0; e < n_combos_; ++e) total += counts_[e * n_objects_ + target];
  return total;
}

double Cpt::coverage() const {
  std::size_t seen = 0;
  for (std::size_t e = 0; e < n_combos_; ++e) {
    const auto row = counts().subspan(e * n_objects_, n_objects_);
    if (std::any_of(row.begin(), row.end(), [](std::uint64_t c) { return c > 0; })) ++seen;
  }
  return static_cast<double>(seen) / static_cast<double>(n_combos_);
}

std::vector<double> Cpt::target_posterior(std::size_t combo) const {
  std::vector<double> out(n_objects_, 1.0 / static_cast<double>(n_objects_));
  double total = 0.0;
  for (std::size_t i = 0; i < n_objects_; ++i) total += static_cast<double>(count(combo, i));
  if (total > 0.0) {
    for (std::size_t i = 0; i < n_objects_; ++i) out[i] = static_cast<double>(count(combo, i)) / total;
  }
  return out;
}

Cpt Cpt::project(BaselineKind kind) const {
  if (kind_ != BaselineKind::FullBI) {
    if (kind == kind_) return *this;
    throw Error(ErrorCode::CptMismatch, "only a full CPT can be projected");
  }
  const std::size_t projected = evidence_space_size(n_objects_, kind);
  std::vector<std::uint64_t> counts(projected * n_objects_, 0);
  for (std::size_t e = 0; e < n_combos_; ++e) {
    const std::size_t target_combo = evidence_index(evidence_from_index(e, n_objects_, kind_), n_objects_, kind);
    for (std::size_t i = 0; i < n_objects_; ++i) counts[target_combo * n_objects_ + i] += count(e, i);
  }
  return Cpt(n_objects_, kind, alpha_, evidence_, std::move(counts));
}

void Cpt::write(std::ostream& out) const {
  out << kCptMagic << ' ' << kCptVersion << '\n';
  out << "n_objects " << n_objects_ << '\n';
  out << "modality " << to_string(kind_) << '\n';
  out << "alpha " << format_double(alpha_) << '\n';
  out << "gamma_h " << format_double(evidence_.gamma_h) << '\n';
  out << "gamma_v " << format_double(evidence_.gamma_v) << '\n';
  out << "v_min " << format_double(evidence_.v_min) << '\n';
  out << "velocity_alpha " << format_double(evidence_.velocity_alpha) << '\n';
  out << "combos " << n_combos_ << '\n';
  for (std::size_t e = 0; e < n_combos_; ++e) {
    const DiscreteEvidence ev = evidence_from_index(e, n_objects_, kind_);
    for (std::size_t i = 0; i < n_objects_; ++i) {
      out << "combo=" << e;
      if (keeps_head(kind_)) out << " head=" << ev.head_target;
      if (keeps_motion(kind_)) {
        out << " motion=";
        if (ev.motion_target) out << *ev.motion_target;
        else out << "none";
      }
      if (keeps_hand(kind_)) out << " hand=" << to_string(ev.hand_state);
      out << " target=" << i << " count=" << count(e, i) << " p=" << format_double(likelihood(e, i)) << '\n';
    }
  }
}

Cpt Cpt::read(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::string, std::less<>> header;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line.front() != '#') return true;
    }
    return false;
  };

  if (!next_line()) throw Error(ErrorCode::ParseError, "empty CPT file");
  {
    std::istringstream first(line);
    std::string magic;
    int version = 0;
    if (!(first >> magic >> version) || magic != kCptMagic || version != kCptVersion) {
      throw Error(ErrorCode::ParseError, "line 1: not a bi-cpt v1 file");
    }
  }
  const char* required[] = {"n_objects", "modality", "alpha", "gamma_h", "gamma_v", "v_min", "velocity_alpha", "combos"};
  while (header.size() < std::size(required)) {
    if (!next_line()) throw Error(ErrorCode::SchemaViolation, "truncated CPT header");
    std::istringstream fields(line);
    std::string key, value, extra;
    if (!(fields >> key >> value) || (fields >> extra)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 'key value'");
    }
    if (std::find(std::begin(required), std::end(required), key) == std::end(required)) {
      throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line_no) + ": unknown header key '" + key + "'");
    }
    if (!header.emplace(key, value).second) {
      throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }

  const auto n_objects = static_cast<std::size_t>(parse_uint(header["n_objects"], line_no));
  const BaselineKind kind = baseline_from_string(header["modality"]);
  const double alpha = parse_double(header["alpha"], line_no);
  EvidenceConfig evidence;
  evidence.gamma_h = parse_double(header["gamma_h"], line_no);
  evidence.gamma_v = parse_double(header["gamma_v"], line_no);
  evidence.v_min = parse_double(header["v_min"], line_no);
  evidence.velocity_alpha = parse_double(header["velocity_alpha"], line_no);
  const auto combos = static_cast<std::size_t>(parse_uint(header["combos"], line_no));
  if (n_objects == 0) throw Error(ErrorCode::SchemaViolation, "n_objects must be positive");
  if (combos != evidence_space_size(n_objects, kind)) {
    throw Error(ErrorCode::SchemaViolation, "combos does not match n_objects and modality");
  }

  std::vector<std::uint64_t> counts(combos * n_objects, 0);
  std::vector<double> probs(combos * n_objects, 0.0);
  std::vector<bool> seen(combos * n_objects, false);
  for (std::size_t record = 0; record < combos * n_objects; ++record) {
    if (!next_line()) throw Error(ErrorCode::SchemaViolation, "expected " + std::to_string(combos * n_objects) + " records");
    std::istringstream fields(line);
    std::string token;
    std::map<std::string, std::string, std::less<>> kv;
    while (fields >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected key=value, got '" + token + "'");
      }
      kv[token.substr(0, eq)] = token.substr(eq + 1);
    }
    for (const char* key : {"combo", "target", "count", "p"}) {
      if (!kv.contains(key)) {
        throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line_no) + ": missing '" + key + "'");
      }
    }
    const auto combo = static_cast<std::size_t>(parse_uint(kv["combo"], line_no));
    const auto target = static_cast<std::size_t>(parse_uint(kv["target"], line_no));
    if (combo >= combos || target >= n_objects) {
      throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line_no) + ": combo or target out of range");
    }
    const std::size_t cell = combo * n_objects + target;
    if (seen[cell]) throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line_no) + ": duplicate record");
    seen[cell] = true;
    counts[cell] = parse_uint(kv["count"], line_no);
    probs[cell] = parse_double(kv["p"], line_no);
  }
  if (next_line()) {
    throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line_no) + ": trailing content after records");
  }

  const bool has_counts = std::any_of(counts.begin(), counts.end(), [](std::uint64_t c) { return c > 0; });
  if (!has_counts && alpha == 0.0) return from_likelihoods(n_objects, kind, evidence, std::move(probs));

  Cpt cpt(n_objects, kind, alpha, evidence, std::move(counts));
  for (std::size_t cell = 0; cell < probs.size(); ++cell) {
    if (std::abs(cpt.likelihood_[cell] - probs[cell]) > 1e-12) {
      throw Error(ErrorCode::SchemaViolation, "record probability disagrees with its counts (cell " +
                                                  std::to_string(cell) + ")");
    }
  }
  return cpt;
}

// --- CptBuilder ------------------------------------------------------------

CptBuilder::CptBuilder(std::size_t n_objects, BaselineKind kind, const EvidenceConfig& evidence)
    : n_objects_(n_objects),
      kind_(kind),
      evidence_(evidence),
      counts_(evidence_space_size(n_objects, kind) * n_objects, 0) {
  if (n_objects == 0) throw Error(ErrorCode::EmptyScene, "a CPT needs at least one target");
}

void CptBuilder::add(const DiscreteEvidence& e, std::size_t label) {
  add_index(evidence_index(e, n_objects_, kind_), label);
}

void CptBuilder::add_index(std::size_t combo, std::size_t label) {
  if (label >= n_objects_ || combo >= counts_.size() / n_objects_) {
    throw Error(ErrorCode::SchemaViolation, "evidence or label outside the CPT");
  }
  ++counts_[combo * n_objects_ + label];
}

Cpt CptBuilder::build(double alpha) const { return Cpt(n_objects_, kind_, alpha, evidence_, counts_); }

Cpt learn_cpt(std::span<const Trajectory> trajectories, const PredictorConfig& config, BaselineKind kind) {
  if (trajectories.empty()) throw Error(ErrorCode::EmptyDataset, "no training trajectories");
  config.validate();
  const std::size_t n = trajectories.front().scene.size();
  CptBuilder builder(n, kind, config.evidence);
  for (const auto& trajectory : trajectories) {
    if (trajectory.scene.size() != n) {
      throw Error(ErrorCode::InconsistentSceneSize, "training trajectories disagree on the number of objects");
    }
    if (trajectory.label >= n) throw Error(ErrorCode::SchemaViolation, "trajectory label outside the scene");
    EvidenceExtractor extractor(config.evidence);
    for (const auto& frame : trajectory.frames) {
      builder.add(extractor.observe(frame, trajectory.scene), trajectory.label);
    }
  }
  return builder.build(config.smoothing_alpha);
}

// --- Belief recursion --------------------------------------------------------

Belief init_belief(std::size_t n_objects) {
  if (n_objects == 0) throw Error(ErrorCode::EmptyScene, "belief over an empty scene");
  return Belief{std::vector<double>(n_objects, 1.0 / static_cast<double>(n_objects)), 0};
}

Belief update(const Belief& belief, std::span<const double> likelihoods, double forgetting) {
  const std::size_t n = belief.probs.size();
  if (n == 0 || likelihoods.size() != n) {
    throw Error(ErrorCode::InconsistentSceneSize, "belief and likelihood sizes differ");
  }
  const double mix = forgetting / static_cast<double>(n);
  Belief out{std::vector<double>(n), belief.t + 1};
  double evidence = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double prior = (1.0 - forgetting) * belief.probs[i] + mix;
    out.probs[i] = likelihoods[i] * prior;
    evidence += out.probs[i];
  }
  if (!(evidence > 0.0)) throw Error(ErrorCode::ZeroEvidence, "evidence has zero probability under every target");
  for (std::size_t i = 0; i < n; ++i) {
    const double prior = (1.0 - forgetting) * belief.probs[i] + mix;
    out.probs[i] /= evidence;
    // Long streams can underflow a losing hypothesis; it stays representable.
    if (likelihoods[i] > 0.0 && prior > 0.0) {
      out.probs[i] = std::max(out.probs[i], std::numeric_limits<double>::min());
    }
  }
  return out;
}

Belief update(const Belief& belief, const DiscreteEvidence& e, const Cpt& cpt, double forgetting) {
  if (belief.probs.size() != cpt.n_objects()) {
    throw Error(ErrorCode::CptMismatch, "belief covers " + std::to_string(belief.probs.size()) +
                                            " objects, CPT covers " + std::to_string(cpt.n_objects()));
  }
  return update(belief, cpt.likelihood_row(cpt.combo_index(e)), forgetting);
}

std::size_t predict(const Belief& belief) {
  const auto it = std::max_element(belief.probs.begin(), belief.probs.end());
  return static_cast<std::size_t>(std::distance(belief.probs.begin(), it));
}

// --- Predictor ---------------------------------------------------------------

Predictor::Predictor(std::shared_ptr<const Cpt> cpt, const PredictorConfig& config)
    : cpt_(std::move(cpt)),
      config_(config),
      extractor_(cpt_ ? cpt_->evidence_config() : EvidenceConfig{}),
      belief_(init_belief(cpt_ ? cpt_->n_objects() : 0)) {
  config_.validate();
}

StepResult Predictor::step(const Observation& obs, const Scene& scene) {
  const auto start = std::chrono::steady_clock::now();
  if (scene.size() != cpt_->n_objects()) {
    throw Error(ErrorCode::CptMismatch, "scene has " + std::to_string(scene.size()) + " objects, CPT expects " +
                                            std::to_string(cpt_->n_objects()));
  }
  const DiscreteEvidence e = extractor_.observe(obs, scene);
  belief_ = update(belief_, e, *cpt_, config_.forgetting);
  const std::size_t predicted = predict(belief_);
  const auto stop = std::chrono::steady_clock::now();
  return StepResult{belief_, predicted, e, std::chrono::duration<double>(stop - start).count()};
}

void Predictor::reset_belief() { belief_ = init_belief(cpt_->n_objects()); }

void Predictor::reset() {
  reset_belief();
  extractor_.reset();
}

}  // namespace bi
