// Test-only reference implementations, kept independent of the library's
// computation paths.
#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace advaug::testing {

// O(P*N) pairwise Mann-Whitney AUC: positives beating negatives count 1,
// ties count 0.5.
inline double brute_force_auc(const std::vector<int>& labels, const std::vector<double>& scores) {
  assert(labels.size() == scores.size());
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  assert(pairs > 0);
  return wins / static_cast<double>(pairs);
}

}  // namespace advaug::testing
