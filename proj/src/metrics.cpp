#include "advaug/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "advaug/text.hpp"

namespace advaug {

double auc(const ScoredPredictions& p) {
  if (p.labels.size() != p.scores.size()) {
    throw std::invalid_argument("auc: labels/scores length mismatch");
  }
  const std::size_t n = p.labels.size();
  if (n < 2) {
    throw std::invalid_argument("auc: need at least two samples");
  }
  std::size_t positives = 0;
  for (int y : p.labels) {
    if (y != 0 && y != 1) throw std::invalid_argument("auc: labels must be 0/1");
    positives += static_cast<std::size_t>(y);
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("AUC undefined: both classes must be present");
  }

  // Rank-sum with average ranks for ties; equivalent to pairwise counting
  // with ties worth 0.5.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return p.scores[a] < p.scores[b]; });

  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && p.scores[order[j]] == p.scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t t = i; t < j; ++t) {
      if (p.labels[order[t]] == 1) positive_rank_sum += avg_rank;
    }
    i = j;
  }

  const double pos = static_cast<double>(positives);
  const double neg = static_cast<double>(negatives);
  return (positive_rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

double confusion_score_from_auc(double auc_value) { return std::abs(0.5 - auc_value); }

double confusion_score(const ScoredPredictions& p) { return confusion_score_from_auc(auc(p)); }

double adversarialness_scale_from_auc(double auc_value) {
  return -1.8 * std::abs(auc_value - 0.5) + 1.0;
}

double adversarialness_scale(const ScoredPredictions& p) {
  return adversarialness_scale_from_auc(auc(p));
}

double coherency_scale(double same_meaning_fraction) {
  if (same_meaning_fraction < 0.0 || same_meaning_fraction > 1.0) {
    throw std::invalid_argument("coherency_scale: fraction outside [0,1]");
  }
  return 0.1 + 0.9 * same_meaning_fraction;
}

double prompt_set_diversity(const std::vector<Eigen::VectorXd>& deltas) {
  if (deltas.size() < 2) {
    throw std::invalid_argument("prompt_set_diversity: need at least two vectors");
  }
  double sim_sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    for (std::size_t j = i + 1; j < deltas.size(); ++j) {
      sim_sum += cosine_similarity(deltas[i], deltas[j]);
      ++pairs;
    }
  }
  return 1.0 - sim_sum / static_cast<double>(pairs);
}

double type_token_ratio(std::string_view text) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) {
    throw std::invalid_argument("type_token_ratio: no tokens");
  }
  std::unordered_set<std::string> types(tokens.begin(), tokens.end());
  return static_cast<double>(types.size()) / static_cast<double>(tokens.size());
}

namespace {

constexpr char kUnknown[] = "<unk>";
constexpr char kStart[] = "<s>";

std::string join_key(const std::vector<std::string>& toks, std::size_t begin, std::size_t end) {
  std::string key;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) key.push_back('\x1f');
    key += toks[i];
  }
  return key;
}

}  // namespace

NGramLM::NGramLM(const std::vector<std::string>& corpus, int order) : order_(order) {
  if (order < 1) {
    throw std::invalid_argument("ngram lm: order must be >= 1");
  }
  if (corpus.empty()) {
    throw std::invalid_argument("ngram lm: empty corpus");
  }
  for (const auto& doc : corpus) {
    for (auto& tok : tokenize(doc)) vocab_.insert(tok);
  }
  vocabulary_ = vocab_.size() + 1;  // + <unk>

  for (const auto& doc : corpus) {
    auto toks = tokenize(doc);
    if (toks.empty()) continue;
    std::vector<std::string> padded(static_cast<std::size_t>(order_ - 1), kStart);
    padded.insert(padded.end(), toks.begin(), toks.end());
    for (std::size_t i = static_cast<std::size_t>(order_ - 1); i < padded.size(); ++i) {
      const std::size_t ctx_begin = i - static_cast<std::size_t>(order_ - 1);
      ++ngram_counts_[join_key(padded, ctx_begin, i + 1)];
      ++context_counts_[join_key(padded, ctx_begin, i)];
    }
  }
}

std::vector<std::string> NGramLM::map_tokens(std::string_view text) const {
  std::vector<std::string> out;
  for (auto& tok : tokenize(text)) {
    out.push_back(vocab_.count(tok) ? std::move(tok) : std::string(kUnknown));
  }
  return out;
}

double NGramLM::perplexity(std::string_view text) const {
  auto toks = map_tokens(text);
  if (toks.empty()) {
    throw std::invalid_argument("perplexity: no tokens");
  }
  std::vector<std::string> padded(static_cast<std::size_t>(order_ - 1), kStart);
  padded.insert(padded.end(), toks.begin(), toks.end());

  const double v = static_cast<double>(vocabulary_);
  double neg_log_sum = 0.0;
  std::size_t predicted = 0;
  for (std::size_t i = static_cast<std::size_t>(order_ - 1); i < padded.size(); ++i) {
    const std::size_t ctx_begin = i - static_cast<std::size_t>(order_ - 1);
    const auto ngram_it = ngram_counts_.find(join_key(padded, ctx_begin, i + 1));
    const auto ctx_it = context_counts_.find(join_key(padded, ctx_begin, i));
    const double ngram_count = ngram_it != ngram_counts_.end() ? static_cast<double>(ngram_it->second) : 0.0;
    const double ctx_count = ctx_it != context_counts_.end() ? static_cast<double>(ctx_it->second) : 0.0;
    const double prob = (ngram_count + 1.0) / (ctx_count + v);
    neg_log_sum -= std::log(prob);
    ++predicted;
  }
  return std::exp(neg_log_sum / static_cast<double>(predicted));
}

NGramLM train_ngram_lm(const std::vector<std::string>& corpus, int order) {
  return NGramLM(corpus, order);
}

}  // namespace advaug
