#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace advaug {

inline constexpr int kManifestSchemaVersion = 1;

// One candidate prompt as evaluated in a round.
struct CandidateRecord {
  std::string instruction;
  std::string origin;  // "seed" or "generated"
  double auc = 0.0;
  double confusion = 0.0;        // s_c
  double adversarialness = 0.0;  // s_adv
  double coherency = 0.0;        // s_coh
  bool selected = false;
  bool flip_warning = false;  // AUC fell below the flip threshold

  bool operator==(const CandidateRecord&) const = default;
};

struct RoundRecord {
  int round = 0;
  std::vector<CandidateRecord> candidates;
  std::vector<std::string> selected;  // instructions, in selection order
  double clean_auc = 0.0;             // held-out test AUC after this round's training
  std::optional<double> mean_attack_auc;            // present when per-round attack eval is on
  std::map<std::string, double> attack_auc;         // per-attack breakdown, same condition

  bool operator==(const RoundRecord&) const = default;
};

struct TrajectoryRecord {
  std::string instruction;
  double score = 0.0;
  int round = 0;

  bool operator==(const TrajectoryRecord&) const = default;
};

// Everything needed to audit or resume a run. Round records are kept in
// strictly increasing order and every selected prompt appears among that
// round's candidates; save/load enforce both.
struct RunManifest {
  int schema_version = kManifestSchemaVersion;
  std::map<std::string, std::string> config;  // flat key-value snapshot
  std::uint64_t base_seed = 0;
  std::vector<RoundRecord> rounds;
  std::vector<TrajectoryRecord> trajectory;  // descending by score
  std::string created_at;
  std::string finished_at;
  std::vector<std::string> warnings;

  bool operator==(const RunManifest&) const = default;

  void validate() const;
};

void save_manifest(const RunManifest& m, const std::string& path);
RunManifest load_manifest(const std::string& path);

// ISO-8601 UTC wall clock; honors SOURCE_DATE_EPOCH for reproducible output.
std::string current_timestamp();

}  // namespace advaug
