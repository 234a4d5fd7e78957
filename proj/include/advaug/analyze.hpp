#pragma once

#include <string>
#include <vector>

namespace advaug {

struct AnalyzeResult {
  std::vector<std::string> omissions;

  bool complete() const { return omissions.empty(); }
};

// Reads a run directory (manifest + stored artifacts) and writes plot-ready
// CSVs into out_dir:
//   rounds.csv     - per-round clean AUC and mean attack AUC
//   selection.csv  - selected vs adversarial-only diversity, adversarialness
//                    and embedding-cosine coherency of selected vs unselected
//   textstats.csv  - mean type-token ratio and bigram perplexity of augmented
//                    samples per round (round -1 = the original training texts)
//   histograms.csv - long-format histogram bins for both statistics
//   notes.txt      - omissions, when artifacts were missing
// Missing artifacts degrade to a partial report with the omissions listed.
AnalyzeResult analyze_run(const std::string& run_dir, const std::string& out_dir);

}  // namespace advaug
