#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "advaug/detector.hpp"
#include "advaug/gateway.hpp"
#include "advaug/prompts.hpp"
#include "advaug/types.hpp"

namespace advaug {

// Everything measured about one candidate prompt in one round.
struct CandidateEvaluation {
  ConversionPrompt prompt;
  SubsetBatch batch;
  double auc = 0.0;
  double confusion = 0.0;        // s_c = |0.5 - auc|
  double adversarialness = 0.0;  // s_adv = 1 - 1.8 * s_c
  double coherency = -1.0;       // s_coh in [0.1, 1]; negative until computed
  Eigen::VectorXd delta;         // z_c: mean converted embedding minus mean original
  Eigen::VectorXd scaled_delta;  // z_hat: delta scaled by the enabled criteria
  bool flip_warning = false;     // AUC fell below 0.5 - flip_threshold

  bool coherency_computed() const { return coherency >= 0.0; }
};

// Bounded history of (prompt, confusion score) pairs kept in descending score
// order, so the most confusing prompts (lower is better) render last in the
// generation request. When over capacity, the highest-score entries go first.
class Trajectory {
 public:
  explicit Trajectory(std::size_t capacity = 20);

  void insert(PromptScoreRecord record);
  void insert_all(const std::vector<PromptScoreRecord>& records);

  const std::vector<PromptScoreRecord>& records() const { return records_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return records_.size(); }
  bool contains(const std::string& instruction) const;

 private:
  std::size_t capacity_;
  std::vector<PromptScoreRecord> records_;
};

struct ScoreOptions {
  double flip_threshold = 0.3;
};

// Converts every item of the probe subset with the prompt, scores the
// conversions with the detector, and measures the embedding delta. The
// returned evaluation is complete through adversarialness and delta;
// coherency and the scaled delta are attached by attach_coherency.
CandidateEvaluation score_candidate(const ConversionPrompt& prompt,
                                    const std::vector<NewsItem>& subset, const Detector& detector,
                                    const Featurizer& embedder, Gateway& gw,
                                    const ScoreOptions& opts = {});

struct ScalingFlags {
  bool use_adversarialness = true;  // off: the no-adversarialness ablation
  bool use_coherency = true;        // off: the no-coherency ablation
};

// Judges meaning preservation over the batch pairs, maps the raw fraction
// onto [0.1, 1], and sets scaled_delta from the enabled criteria.
void attach_coherency(CandidateEvaluation& eval, Gateway& gw, const ScalingFlags& flags = {});

enum class SelectionMode {
  kFarthestPoint,     // deterministic k-means++-style seeding on scaled deltas
  kD2Sampling,        // classic randomized k-means++ seeding, seeded
  kRandom,            // uniform k-subset (the random-selection ablation)
  kAdversarialOnly,   // top-k by adversarialness, geometry ignored
};

// Returns indices into `candidates`, in pick order. Farthest-point seeding:
// first the maximum-norm scaled delta, then whatever maximizes the squared
// distance to the nearest already-picked vector; ties break on instruction
// text. If every scaled delta is zero the pick falls back to ascending
// confusion order and a warning is recorded.
std::vector<std::size_t> select_top_k(const std::vector<CandidateEvaluation>& candidates,
                                      std::size_t k, SelectionMode mode, std::uint64_t seed,
                                      std::vector<std::string>* warnings = nullptr);

struct RoundConfig {
  std::size_t candidates_per_round = 30;  // how many prompts the generator must yield
  std::size_t select_count = 3;           // how many go on to augmentation
  std::size_t probe_subset_size = 30;     // shared scoring subset size
  SelectionMode selection = SelectionMode::kFarthestPoint;
  ScalingFlags scaling;
  GenerationPromptOptions generation;     // trajectory rendering + buckets
  int generation_retries = 3;
  double flip_threshold = 0.3;
  bool trajectory_keeps_unselected = true;  // false: only selected prompts enter the history
  std::string model = "default";
};

struct OptimizerState {
  Trajectory trajectory;
  int next_round = 0;

  explicit OptimizerState(std::size_t trajectory_capacity = 20) : trajectory(trajectory_capacity) {}
};

struct RoundResult {
  int round = 0;
  std::vector<CandidateEvaluation> evaluations;  // all candidates, generation order
  std::vector<std::size_t> selected;             // indices into evaluations, pick order
  std::vector<std::string> warnings;
};

// Scores the predefined tone prompts on a probe subset and installs them as
// the round-0 trajectory. Called once before the first round.
void seed_trajectory(OptimizerState& state, const Detector& detector, const Dataset& train,
                     const Featurizer& embedder, Gateway& gw, const RoundConfig& cfg,
                     std::uint64_t base_seed);

// One full generate -> score -> judge -> select cycle over a shared probe
// subset. The state is committed only after every step succeeded, so a
// failing round leaves trajectory and round counter untouched.
RoundResult run_round(OptimizerState& state, const Detector& detector, const Dataset& train,
                      const Featurizer& embedder, Gateway& gw, const RoundConfig& cfg,
                      std::uint64_t base_seed);

// Stratified probe subset of size min(size, |train|), both classes guaranteed.
std::vector<NewsItem> sample_probe_subset(const Dataset& train, std::size_t size,
                                          std::uint64_t seed);

}  // namespace advaug
