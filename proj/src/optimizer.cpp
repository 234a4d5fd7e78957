#include "advaug/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "advaug/metrics.hpp"
#include "advaug/text.hpp"

namespace advaug {

Trajectory::Trajectory(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("trajectory: capacity must be >= 1");
}

bool Trajectory::contains(const std::string& instruction) const {
  return std::any_of(records_.begin(), records_.end(),
                     [&](const PromptScoreRecord& r) { return r.prompt.instruction == instruction; });
}

void Trajectory::insert(PromptScoreRecord record) {
  records_.push_back(std::move(record));
  std::sort(records_.begin(), records_.end(), [](const PromptScoreRecord& a, const PromptScoreRecord& b) {
    if (a.score != b.score) return a.score > b.score;  // descending; best (lowest) last
    if (a.round != b.round) return a.round < b.round;
    return a.prompt.instruction < b.prompt.instruction;
  });
  if (records_.size() > capacity_) {
    // evict the least confusing entries (highest score, at the front)
    records_.erase(records_.begin(),
                   records_.begin() + static_cast<std::ptrdiff_t>(records_.size() - capacity_));
  }
}

void Trajectory::insert_all(const std::vector<PromptScoreRecord>& records) {
  for (const auto& r : records) insert(r);
}

std::vector<NewsItem> sample_probe_subset(const Dataset& train, std::size_t size, std::uint64_t seed) {
  if (train.empty()) throw std::invalid_argument("probe subset: empty dataset");
  if (!train.has_both_classes()) throw std::invalid_argument("probe subset: both classes required");
  size = std::min(size, train.size());
  if (size < 2) throw std::invalid_argument("probe subset: need at least two items");

  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < train.items.size(); ++i) {
    by_class[static_cast<std::size_t>(to_int(train.items[i].label))].push_back(i);
  }
  // proportional allocation, each class clamped to at least one item
  const double frac = static_cast<double>(size) / static_cast<double>(train.size());
  std::array<std::size_t, 2> counts{};
  for (std::size_t c = 0; c < 2; ++c) {
    counts[c] = std::min(by_class[c].size(),
                         static_cast<std::size_t>(std::llround(frac * static_cast<double>(by_class[c].size()))));
  }
  for (std::size_t c = 0; c < 2; ++c) {
    if (counts[c] == 0) {
      counts[c] = 1;
      const std::size_t other = 1 - c;
      if (counts[other] > 1 && counts[0] + counts[1] > size) --counts[other];
    }
  }
  while (counts[0] + counts[1] < size) {
    const std::size_t c = (by_class[0].size() - counts[0]) >= (by_class[1].size() - counts[1]) ? 0 : 1;
    if (counts[c] < by_class[c].size()) ++counts[c];
    else break;
  }
  while (counts[0] + counts[1] > size) {
    const std::size_t c = counts[0] >= counts[1] ? 0 : 1;
    if (counts[c] > 1) --counts[c];
    else break;
  }

  Rng rng(derive_seed(seed, "probe-subset"));
  std::vector<std::size_t> picked;
  for (std::size_t c = 0; c < 2; ++c) {
    rng.shuffle(by_class[c]);
    for (std::size_t i = 0; i < counts[c]; ++i) picked.push_back(by_class[c][i]);
  }
  std::sort(picked.begin(), picked.end());
  std::vector<NewsItem> out;
  out.reserve(picked.size());
  for (std::size_t i : picked) out.push_back(train.items[i]);
  return out;
}

CandidateEvaluation score_candidate(const ConversionPrompt& prompt,
                                    const std::vector<NewsItem>& subset, const Detector& detector,
                                    const Featurizer& embedder, Gateway& gw, const ScoreOptions& opts) {
  if (subset.size() < 2) {
    throw std::invalid_argument("score_candidate: probe subset too small");
  }
  bool has_fake = false;
  bool has_real = false;
  for (const auto& item : subset) {
    (item.label == Label::kFake ? has_fake : has_real) = true;
  }
  if (!has_fake || !has_real) {
    throw std::invalid_argument("score_candidate: probe subset must contain both classes");
  }

  CandidateEvaluation eval;
  eval.prompt = prompt;
  eval.batch.original = subset;
  eval.batch.converted.reserve(subset.size());
  for (const auto& item : subset) {
    NewsItem converted = item;
    try {
      converted.text = apply_style(gw, prompt, item.text);
    } catch (const GatewayCallError& e) {
      throw GatewayCallError("score_candidate: conversion failed for item '" + item.id +
                             "': " + e.what());
    }
    eval.batch.converted.push_back(std::move(converted));
  }

  ScoredPredictions preds;
  preds.labels.reserve(subset.size());
  preds.scores.reserve(subset.size());
  for (const auto& item : eval.batch.converted) {
    preds.labels.push_back(to_int(item.label));
    preds.scores.push_back(detector.predict_proba(item.text));
  }
  eval.auc = auc(preds);
  eval.confusion = confusion_score_from_auc(eval.auc);
  eval.adversarialness = adversarialness_scale_from_auc(eval.auc);
  eval.flip_warning = eval.auc <= 0.5 - opts.flip_threshold;

  Eigen::VectorXd original_mean = Eigen::VectorXd::Zero(embedder.dimension());
  Eigen::VectorXd converted_mean = Eigen::VectorXd::Zero(embedder.dimension());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    original_mean += embedder.featurize(eval.batch.original[i].text);
    converted_mean += embedder.featurize(eval.batch.converted[i].text);
  }
  const double n = static_cast<double>(subset.size());
  eval.delta = (converted_mean - original_mean) / n;
  eval.scaled_delta = eval.delta;
  return eval;
}

void attach_coherency(CandidateEvaluation& eval, Gateway& gw, const ScalingFlags& flags) {
  eval.batch.validate();
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.reserve(eval.batch.size());
  for (std::size_t i = 0; i < eval.batch.size(); ++i) {
    pairs.emplace_back(eval.batch.original[i].text, eval.batch.converted[i].text);
  }
  eval.coherency = coherency_scale(judge_coherency(gw, pairs));
  double scale = 1.0;
  if (flags.use_adversarialness) scale *= eval.adversarialness;
  if (flags.use_coherency) scale *= eval.coherency;
  eval.scaled_delta = eval.delta * scale;
}

namespace {

bool all_deltas_zero(const std::vector<CandidateEvaluation>& candidates) {
  constexpr double kTiny = 1e-300;
  return std::all_of(candidates.begin(), candidates.end(),
                     [](const CandidateEvaluation& c) { return c.scaled_delta.norm() <= kTiny; });
}

std::vector<std::size_t> fallback_by_confusion(const std::vector<CandidateEvaluation>& candidates,
                                               std::size_t k) {
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (candidates[a].confusion != candidates[b].confusion) {
      return candidates[a].confusion < candidates[b].confusion;
    }
    return candidates[a].prompt.instruction < candidates[b].prompt.instruction;
  });
  order.resize(k);
  return order;
}

// prefer lower index only through instruction text, so pick order is
// independent of candidate ordering
bool instruction_less(const std::vector<CandidateEvaluation>& c, std::size_t a, std::size_t b) {
  return c[a].prompt.instruction < c[b].prompt.instruction;
}

std::vector<std::size_t> farthest_point_pick(const std::vector<CandidateEvaluation>& candidates,
                                             std::size_t k) {
  std::vector<std::size_t> selected;
  std::vector<bool> used(candidates.size(), false);

  std::size_t first = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double ni = candidates[i].scaled_delta.squaredNorm();
    const double nf = candidates[first].scaled_delta.squaredNorm();
    if (ni > nf || (ni == nf && instruction_less(candidates, i, first))) first = i;
  }
  selected.push_back(first);
  used[first] = true;

  std::vector<double> nearest(candidates.size(), 0.0);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    nearest[i] = (candidates[i].scaled_delta - candidates[first].scaled_delta).squaredNorm();
  }
  while (selected.size() < k) {
    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (used[i]) continue;
      if (best == candidates.size() || nearest[i] > nearest[best] ||
          (nearest[i] == nearest[best] && instruction_less(candidates, i, best))) {
        best = i;
      }
    }
    selected.push_back(best);
    used[best] = true;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (used[i]) continue;
      nearest[i] = std::min(nearest[i],
                            (candidates[i].scaled_delta - candidates[best].scaled_delta).squaredNorm());
    }
  }
  return selected;
}

std::vector<std::size_t> d2_sampling_pick(const std::vector<CandidateEvaluation>& candidates,
                                          std::size_t k, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "d2-sampling"));
  std::vector<std::size_t> selected;
  std::vector<bool> used(candidates.size(), false);

  const std::size_t first = static_cast<std::size_t>(rng.below(candidates.size()));
  selected.push_back(first);
  used[first] = true;

  std::vector<double> nearest(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    nearest[i] = (candidates[i].scaled_delta - candidates[first].scaled_delta).squaredNorm();
  }
  while (selected.size() < k) {
    std::vector<double> weights(candidates.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!used[i]) {
        weights[i] = nearest[i];
        total += nearest[i];
      }
    }
    std::size_t pick;
    if (total <= 0.0) {
      pick = candidates.size();
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!used[i] && (pick == candidates.size() || instruction_less(candidates, i, pick))) pick = i;
      }
    } else {
      do {
        pick = rng.weighted_pick(weights);
      } while (used[pick]);
    }
    selected.push_back(pick);
    used[pick] = true;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (used[i]) continue;
      nearest[i] = std::min(nearest[i],
                            (candidates[i].scaled_delta - candidates[pick].scaled_delta).squaredNorm());
    }
  }
  return selected;
}

}  // namespace

std::vector<std::size_t> select_top_k(const std::vector<CandidateEvaluation>& candidates,
                                      std::size_t k, SelectionMode mode, std::uint64_t seed,
                                      std::vector<std::string>* warnings) {
  if (k > candidates.size()) {
    throw std::invalid_argument("select_top_k: k=" + std::to_string(k) + " exceeds candidate count " +
                                std::to_string(candidates.size()));
  }
  if (k == 0) return {};
  for (const auto& c : candidates) {
    if (!c.scaled_delta.allFinite()) {
      throw std::invalid_argument("select_top_k: non-finite scaled delta for '" +
                                  c.prompt.instruction + "'");
    }
  }

  switch (mode) {
    case SelectionMode::kAdversarialOnly: {
      std::vector<std::size_t> order(candidates.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (candidates[a].adversarialness != candidates[b].adversarialness) {
          return candidates[a].adversarialness > candidates[b].adversarialness;
        }
        return instruction_less(candidates, a, b);
      });
      order.resize(k);
      return order;
    }
    case SelectionMode::kRandom: {
      Rng rng(derive_seed(seed, "random-selection"));
      std::vector<std::size_t> order(candidates.size());
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(order);
      order.resize(k);
      return order;
    }
    case SelectionMode::kFarthestPoint:
    case SelectionMode::kD2Sampling: {
      if (all_deltas_zero(candidates)) {
        if (warnings != nullptr) {
          warnings->push_back("select_top_k: all scaled deltas are zero, falling back to confusion order");
        }
        return fallback_by_confusion(candidates, k);
      }
      return mode == SelectionMode::kFarthestPoint ? farthest_point_pick(candidates, k)
                                                   : d2_sampling_pick(candidates, k, seed);
    }
  }
  throw std::logic_error("select_top_k: unknown mode");
}

void seed_trajectory(OptimizerState& state, const Detector& detector, const Dataset& train,
                     const Featurizer& embedder, Gateway& gw, const RoundConfig& cfg,
                     std::uint64_t base_seed) {
  const auto subset =
      sample_probe_subset(train, cfg.probe_subset_size, derive_seed(base_seed, "seed-probe"));
  ScoreOptions score_opts;
  score_opts.flip_threshold = cfg.flip_threshold;
  Trajectory seeded = state.trajectory;
  for (const auto& prompt : predefined_tone_prompts()) {
    const auto eval = score_candidate(prompt, subset, detector, embedder, gw, score_opts);
    seeded.insert({prompt, eval.confusion, 0});
  }
  state.trajectory = std::move(seeded);
}

RoundResult run_round(OptimizerState& state, const Detector& detector, const Dataset& train,
                      const Featurizer& embedder, Gateway& gw, const RoundConfig& cfg,
                      std::uint64_t base_seed) {
  const int round = state.next_round;
  RoundResult result;
  result.round = round;

  const auto subset = sample_probe_subset(
      train, cfg.probe_subset_size, derive_seed(base_seed, "round-probe", static_cast<std::uint64_t>(round)));
  if (subset.size() < cfg.probe_subset_size) {
    result.warnings.push_back("probe subset clamped to " + std::to_string(subset.size()) +
                              " items (dataset smaller than configured size)");
  }

  GenerateOptions gen_opts;
  gen_opts.prompt = cfg.generation;
  gen_opts.max_retries = cfg.generation_retries;
  gen_opts.model = cfg.model;
  const auto candidates =
      generate_candidates(gw, state.trajectory.records(), cfg.candidates_per_round, round, gen_opts);

  ScoreOptions score_opts;
  score_opts.flip_threshold = cfg.flip_threshold;
  result.evaluations.reserve(candidates.size());
  for (const auto& prompt : candidates) {
    auto eval = score_candidate(prompt, subset, detector, embedder, gw, score_opts);
    attach_coherency(eval, gw, cfg.scaling);
    if (eval.flip_warning) {
      result.warnings.push_back("candidate '" + prompt.instruction +
                                "' flips detector predictions (AUC " + std::to_string(eval.auc) + ")");
    }
    result.evaluations.push_back(std::move(eval));
  }

  result.selected = select_top_k(result.evaluations, std::min(cfg.select_count, result.evaluations.size()),
                                 cfg.selection, derive_seed(base_seed, "selection", static_cast<std::uint64_t>(round)),
                                 &result.warnings);

  // All fallible work is done; commit the state.
  Trajectory updated = state.trajectory;
  if (cfg.trajectory_keeps_unselected) {
    for (const auto& eval : result.evaluations) {
      updated.insert({eval.prompt, eval.confusion, round});
    }
  } else {
    for (std::size_t idx : result.selected) {
      updated.insert({result.evaluations[idx].prompt, result.evaluations[idx].confusion, round});
    }
  }
  state.trajectory = std::move(updated);
  state.next_round = round + 1;
  return result;
}

}  // namespace advaug
