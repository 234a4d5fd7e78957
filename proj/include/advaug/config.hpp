#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace advaug {

// Full configuration of a training/attack run. Defaults follow the reference
// settings: 10 rounds, one epoch per round, 30 candidates scored on a shared
// 30-item probe subset, 3 selected per round.
struct RunConfig {
  std::string dataset_path;
  double train_fraction = 0.8;
  double subsample_fraction = 1.0;  // applied to the training split
  int rounds = 10;
  int epochs_per_round = 1;
  std::size_t candidates_per_round = 30;
  std::size_t select_count = 3;
  std::size_t probe_subset_size = 30;
  std::uint64_t seed = 0;

  std::string gateway = "simulated";  // simulated | http | replay | record
  std::string fixture_path;           // replay/record fixture file
  std::string model = "default";
  std::uint64_t gateway_seed = 0;

  std::string detector_featurizer = "hashed_ngram";  // hashed_ngram | external
  std::size_t detector_dim = 1 << 16;
  std::uint64_t detector_hash_seed = 0;
  std::string embedder_featurizer = "hashed_ngram";
  std::size_t embedder_dim = 1 << 12;
  std::uint64_t embedder_hash_seed = 17;
  std::string external_base_url;  // external featurizer settings
  std::string external_model;
  std::size_t external_dim = 0;

  double learning_rate = 1e-3;
  std::size_t batch_size = 8;
  double weight_decay = 0.01;

  std::size_t trajectory_capacity = 20;
  double flip_threshold = 0.3;
  double bucket_high = 0.1;
  double bucket_medium = 0.3;

  // none | random_selection | class_prompt | adversarial_only |
  // no_adversarialness | no_coherency | no_trajectory
  std::string ablation = "none";
  bool kmeanspp_d2_sampling = false;        // randomized seeding instead of farthest-point
  bool trajectory_keeps_unselected = true;  // false: only selected prompts enter the history
  bool accumulate_augmentations = false;    // keep earlier rounds' copies in later epochs
  bool eval_attacks_each_round = false;     // per-round attack AUC in the manifest

  void validate() const;
  std::map<std::string, std::string> to_flat_map() const;
};

// Flat key-value config file: `key = value` lines, `#` comments, values may
// be quoted. Unknown keys are an error.
std::map<std::string, std::string> parse_config_file(const std::string& path);

RunConfig run_config_from_map(const std::map<std::string, std::string>& kv);

// Applies `key=value` override strings on top of an existing config.
void apply_overrides(RunConfig& cfg, const std::map<std::string, std::string>& kv);

}  // namespace advaug
