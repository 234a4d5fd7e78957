#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "advaug/types.hpp"

namespace advaug {

// Aligned labels and detector scores for one evaluation.
struct ScoredPredictions {
  std::vector<int> labels;     // 0/1
  std::vector<double> scores;  // P(fake) in [0,1]
};

// Area under the ROC curve, Mann-Whitney convention: over all
// (positive, negative) pairs, the fraction where the positive outscores the
// negative, ties counted 0.5. Throws if only one class is present.
double auc(const ScoredPredictions& p);

// |0.5 - AUC|. Zero means the predictions are indistinguishable from chance.
double confusion_score(const ScoredPredictions& p);
double confusion_score_from_auc(double auc_value);

// Linear remap of the confusion score onto [0.1, 1]: -1.8*|AUC - 0.5| + 1.
// 1.0 at AUC 0.5, 0.1 at AUC 0 or 1.
double adversarialness_scale(const ScoredPredictions& p);
double adversarialness_scale_from_auc(double auc_value);

// Raw same-meaning fraction p in [0,1] mapped onto [0.1, 1]: 0.1 + 0.9*p.
double coherency_scale(double same_meaning_fraction);

// Standard cosine similarity. Accepts any Eigen expression; throws on a zero
// vector or on dimension mismatch.
template <typename DerivedA, typename DerivedB>
double cosine_similarity(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine_similarity: dimension mismatch");
  }
  const double na = a.template cast<double>().norm();
  const double nb = b.template cast<double>().norm();
  if (na == 0.0 || nb == 0.0) {
    throw std::invalid_argument("cosine_similarity: zero vector");
  }
  return a.template cast<double>().dot(b.template cast<double>()) / (na * nb);
}

// 1 minus the mean cosine similarity over all unordered distinct pairs.
// Requires at least two vectors, all nonzero.
double prompt_set_diversity(const std::vector<Eigen::VectorXd>& deltas);

// Distinct tokens over total tokens, on the shared tokenizer. Throws on an
// empty token stream.
double type_token_ratio(std::string_view text);

// Word-level n-gram language model with add-one smoothing. Out-of-vocabulary
// tokens map to a reserved unknown symbol, so perplexity is finite for any
// input. Immutable after training.
class NGramLM {
 public:
  NGramLM(const std::vector<std::string>& corpus, int order);

  int order() const { return order_; }
  std::size_t vocabulary_size() const { return vocabulary_; }

  // exp of the mean negative log probability per token.
  double perplexity(std::string_view text) const;

 private:
  std::vector<std::string> map_tokens(std::string_view text) const;

  int order_;
  std::size_t vocabulary_ = 0;  // distinct trained tokens + <unk>
  std::map<std::string, std::uint64_t> ngram_counts_;
  std::map<std::string, std::uint64_t> context_counts_;
  std::unordered_set<std::string> vocab_;
};

NGramLM train_ngram_lm(const std::vector<std::string>& corpus, int order = 2);

inline ScoredPredictions scored_predictions_from(const Dataset& data, const std::vector<double>& scores) {
  ScoredPredictions p;
  p.labels.reserve(data.size());
  for (const auto& it : data.items) p.labels.push_back(to_int(it.label));
  p.scores = scores;
  return p;
}

}  // namespace advaug
