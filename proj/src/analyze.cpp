#include "advaug/analyze.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include <nlohmann/json.hpp>

#include "advaug/dataset.hpp"
#include "advaug/manifest.hpp"
#include "advaug/metrics.hpp"
#include "advaug/text.hpp"

namespace advaug {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct CandidateArtifact {
  std::string instruction;
  double adversarialness = 0.0;
  double pair_cosine = 0.0;
  bool selected = false;
  Eigen::VectorXd delta;
};

std::optional<std::vector<CandidateArtifact>> load_candidates(const std::string& run_dir, int round) {
  const std::string path = run_dir + "/candidates/round_" + std::to_string(round) + ".jsonl";
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::vector<CandidateArtifact> out;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const json j = json::parse(line);
    CandidateArtifact c;
    c.instruction = j.at("instruction").get<std::string>();
    c.adversarialness = j.at("adversarialness").get<double>();
    c.pair_cosine = j.at("pair_cosine").get<double>();
    c.selected = j.at("selected").get<bool>();
    const auto& delta = j.at("delta");
    c.delta.resize(static_cast<Eigen::Index>(delta.size()));
    for (std::size_t i = 0; i < delta.size(); ++i) {
      c.delta[static_cast<Eigen::Index>(i)] = delta[i].get<double>();
    }
    out.push_back(std::move(c));
  }
  return out;
}

// Eq.-style diversity over the non-degenerate deltas; empty when fewer than
// two nonzero vectors remain (e.g. identity conversions).
std::optional<double> diversity_of(const std::vector<Eigen::VectorXd>& deltas) {
  std::vector<Eigen::VectorXd> nonzero;
  for (const auto& d : deltas) {
    if (d.norm() > 0.0) nonzero.push_back(d);
  }
  if (nonzero.size() < 2) return std::nullopt;
  return prompt_set_diversity(nonzero);
}

std::optional<double> mean_of(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::string cell(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

struct TextStats {
  std::vector<double> ttr;
  std::vector<double> perplexity;
};

TextStats stats_for(const std::vector<std::string>& texts, const NGramLM& lm) {
  TextStats s;
  for (const auto& t : texts) {
    s.ttr.push_back(type_token_ratio(t));
    s.perplexity.push_back(lm.perplexity(t));
  }
  return s;
}

void write_histogram(std::ofstream& out, const std::string& metric, int round,
                     const std::vector<double>& values, double lo, double hi, int bins) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  const double width = (hi - lo) / bins;
  for (double v : values) {
    int b = width > 0 ? static_cast<int>((v - lo) / width) : 0;
    b = std::clamp(b, 0, bins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  for (int b = 0; b < bins; ++b) {
    out << metric << ',' << round << ',' << b << ',' << fmt(lo + b * width) << ','
        << fmt(lo + (b + 1) * width) << ',' << counts[static_cast<std::size_t>(b)] << '\n';
  }
}

}  // namespace

AnalyzeResult analyze_run(const std::string& run_dir, const std::string& out_dir) {
  const RunManifest manifest = load_manifest(run_dir + "/manifest.json");
  fs::create_directories(out_dir);
  AnalyzeResult result;

  {
    std::ofstream rounds_csv(out_dir + "/rounds.csv");
    rounds_csv << "round,clean_auc,mean_attack_auc\n";
    for (const auto& r : manifest.rounds) {
      rounds_csv << r.round << ',' << fmt(r.clean_auc) << ',' << cell(r.mean_attack_auc) << '\n';
    }
  }

  {
    std::ofstream sel_csv(out_dir + "/selection.csv");
    sel_csv << "round,diversity_selected,diversity_adversarial_only,mean_adversarialness_selected,"
               "mean_adversarialness_unselected,mean_pair_cosine_selected,mean_pair_cosine_unselected\n";
    for (const auto& r : manifest.rounds) {
      if (r.candidates.empty()) continue;
      const auto artifacts = load_candidates(run_dir, r.round);
      if (!artifacts) {
        result.omissions.push_back("candidates artifact missing for round " + std::to_string(r.round));
        continue;
      }
      std::vector<Eigen::VectorXd> selected_deltas;
      std::vector<double> sadv_selected;
      std::vector<double> sadv_unselected;
      std::vector<double> cos_selected;
      std::vector<double> cos_unselected;
      for (const auto& c : *artifacts) {
        if (c.selected) {
          selected_deltas.push_back(c.delta);
          sadv_selected.push_back(c.adversarialness);
          cos_selected.push_back(c.pair_cosine);
        } else {
          sadv_unselected.push_back(c.adversarialness);
          cos_unselected.push_back(c.pair_cosine);
        }
      }
      // adversarial-only comparison set of the same size
      std::vector<CandidateArtifact> by_sadv = *artifacts;
      std::sort(by_sadv.begin(), by_sadv.end(), [](const CandidateArtifact& a, const CandidateArtifact& b) {
        if (a.adversarialness != b.adversarialness) return a.adversarialness > b.adversarialness;
        return a.instruction < b.instruction;
      });
      std::vector<Eigen::VectorXd> advonly_deltas;
      for (std::size_t i = 0; i < selected_deltas.size() && i < by_sadv.size(); ++i) {
        advonly_deltas.push_back(by_sadv[i].delta);
      }

      sel_csv << r.round << ',' << cell(diversity_of(selected_deltas)) << ','
              << cell(diversity_of(advonly_deltas)) << ',' << cell(mean_of(sadv_selected)) << ','
              << cell(mean_of(sadv_unselected)) << ',' << cell(mean_of(cos_selected)) << ','
              << cell(mean_of(cos_unselected)) << '\n';
    }
  }

  std::vector<std::string> original_texts;
  {
    const std::string originals_path = run_dir + "/train_originals.jsonl";
    if (fs::exists(originals_path)) {
      for (const auto& item : load_dataset(originals_path).items) original_texts.push_back(item.text);
    } else {
      result.omissions.push_back("train_originals.jsonl missing: text statistics skipped");
    }
  }

  if (!original_texts.empty()) {
    const NGramLM lm = train_ngram_lm(original_texts, 2);
    std::ofstream stats_csv(out_dir + "/textstats.csv");
    stats_csv << "round,count,mean_ttr,mean_perplexity\n";

    std::vector<std::pair<int, TextStats>> per_round;
    per_round.emplace_back(-1, stats_for(original_texts, lm));
    for (const auto& r : manifest.rounds) {
      if (r.selected.empty()) continue;
      const std::string path = run_dir + "/augmented/round_" + std::to_string(r.round) + ".jsonl";
      std::ifstream in(path);
      if (!in) {
        result.omissions.push_back("augmented artifact missing for round " + std::to_string(r.round));
        continue;
      }
      std::vector<std::string> texts;
      std::string line;
      while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        texts.push_back(json::parse(line).at("text").get<std::string>());
      }
      per_round.emplace_back(r.round, stats_for(texts, lm));
    }

    double max_ppl = 1.0;
    for (const auto& [round, stats] : per_round) {
      stats_csv << round << ',' << stats.ttr.size() << ',' << cell(mean_of(stats.ttr)) << ','
                << cell(mean_of(stats.perplexity)) << '\n';
      for (double p : stats.perplexity) max_ppl = std::max(max_ppl, p);
    }

    std::ofstream hist_csv(out_dir + "/histograms.csv");
    hist_csv << "metric,round,bin,bin_low,bin_high,count\n";
    for (const auto& [round, stats] : per_round) {
      write_histogram(hist_csv, "ttr", round, stats.ttr, 0.0, 1.0, 20);
      write_histogram(hist_csv, "perplexity", round, stats.perplexity, 0.0, max_ppl * 1.000001, 20);
    }
  }

  {
    std::ofstream notes(out_dir + "/notes.txt");
    if (result.omissions.empty()) {
      notes << "complete\n";
    } else {
      for (const auto& o : result.omissions) notes << o << '\n';
    }
  }
  return result;
}

}  // namespace advaug
