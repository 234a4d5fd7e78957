#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "advaug/config.hpp"
#include "advaug/detector.hpp"
#include "advaug/gateway.hpp"
#include "advaug/manifest.hpp"
#include "advaug/types.hpp"

namespace advaug {

// One attack scenario against the test set.
struct AttackSpec {
  enum class Kind {
    kIdentity,           // repeat verbatim; attack AUC must equal clean AUC
    kPublisherStyle,     // restyle after a named outlet
    kAdversarialRewrite, // two-step: classify with reason, then rewrite to evade
    kSummarization,
    kInContext,          // imitate a provided exemplar article
  };

  Kind kind = Kind::kIdentity;
  std::string name;       // report row label
  std::string parameter;  // publisher name, or the exemplar article text
};

AttackSpec identity_attack();
AttackSpec publisher_attack(const std::string& publisher);
std::vector<AttackSpec> publisher_attacks();  // CNN, The New York Times, The Sun, National Enquirer
AttackSpec adversarial_rewrite_attack();
AttackSpec summarization_attack();
// Empty example falls back to the bundled exemplar article.
AttackSpec in_context_attack(std::string example_article = {});

// "publishers", "all", "identity", or a comma list of attack names.
std::vector<AttackSpec> attack_suite_from_name(const std::string& name);

// (model, attack-or-clean, fraction) -> AUC; a missing value marks a failed
// cell (too many per-item conversion fallbacks).
struct ReportCell {
  std::string model;
  std::string attack;
  double fraction = 1.0;
  std::optional<double> auc;
};

struct ReportTable {
  std::vector<ReportCell> cells;

  void add(std::string model, std::string attack, double fraction, std::optional<double> auc);
  const ReportCell* find(const std::string& attack) const;
  std::string to_csv() const;  // header: model,attack,fraction,auc
  void save_csv(const std::string& path) const;
};

// Converted-text cache keyed by (instruction/attack tag, item id, gateway
// fingerprint). Optionally file-backed so later evaluations of new detectors
// reuse paid conversions.
class ConversionCache {
 public:
  ConversionCache() = default;
  explicit ConversionCache(std::string backing_path);

  std::optional<std::string> get(const std::string& tag, const std::string& item_id,
                                 const std::string& gateway_fingerprint) const;
  void put(const std::string& tag, const std::string& item_id,
           const std::string& gateway_fingerprint, const std::string& text);
  std::size_t size() const { return entries_.size(); }

 private:
  std::string backing_path_;
  std::map<std::string, std::string> entries_;
};

std::shared_ptr<Gateway> make_gateway(const RunConfig& cfg);
std::shared_ptr<Featurizer> make_detector_featurizer(const RunConfig& cfg);
std::shared_ptr<Featurizer> make_embedder(const RunConfig& cfg);

struct RunOutputs {
  Detector detector;
  RunManifest manifest;
};

// The adversarial augmentation loop: warmup epoch on originals, then per
// round generate -> score -> select -> convert the full training split with
// the selected prompts -> train on originals plus the converted copies.
// Checkpoints (manifest + detector + artifacts) land in out_dir after every
// round; resume_dir continues an interrupted run to an identical result.
RunOutputs run_training(const RunConfig& cfg, const Dataset& full, const std::string& out_dir = {},
                        const std::string& resume_dir = {});

// Loads cfg.dataset_path first.
RunOutputs run_training_from_path(const RunConfig& cfg, const std::string& out_dir = {},
                                  const std::string& resume_dir = {});

// "vanilla": originals only for (rounds + 1) * epochs_per_round epochs,
// mirroring the full schedule without augmentation. "predefined_styles": the
// four fixed tone prompts as every round's augmentation set.
RunOutputs run_baseline(const std::string& kind, const RunConfig& cfg, const Dataset& full,
                        const std::string& out_dir = {});

// Toggles exactly one mechanism, then runs the full loop.
RunOutputs run_ablation(const std::string& name, RunConfig cfg, const Dataset& full,
                        const std::string& out_dir = {});

struct AttackEvalOptions {
  std::string model_name = "model";
  double fraction = 1.0;
  ConversionCache* cache = nullptr;
  double max_fallback_fraction = 0.1;  // above this, the cell is marked failed
  std::vector<std::string>* warnings = nullptr;
};

// Clean AUC, one row per attack, and the arithmetic mean of the attack rows
// as `attack_average` (failed if any attack cell failed).
ReportTable run_attack_eval(const Detector& detector, const Dataset& test,
                            const std::vector<AttackSpec>& attacks, Gateway& gw,
                            const AttackEvalOptions& opts = {});

}  // namespace advaug
