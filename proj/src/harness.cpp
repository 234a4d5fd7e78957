#include "advaug/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "advaug/dataset.hpp"
#include "advaug/metrics.hpp"
#include "advaug/optimizer.hpp"
#include "advaug/text.hpp"

namespace advaug {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Attack specs

namespace {

// Bundled exemplar for the in-context attack; a deliberately sober wire-style
// piece so imitation pulls articles toward the institutional register.
constexpr const char* kBundledExemplarArticle =
    "According officials the regional council confirmed a documented budget statement . "
    "Verified analysis measured the annual funding program according spokesperson reviewed "
    "reports . Officials stated the committee announced a measured infrastructure review .";

}  // namespace

AttackSpec identity_attack() {
  return {AttackSpec::Kind::kIdentity, "identity", ""};
}

AttackSpec publisher_attack(const std::string& publisher) {
  return {AttackSpec::Kind::kPublisherStyle, publisher, publisher};
}

std::vector<AttackSpec> publisher_attacks() {
  return {publisher_attack("CNN"), publisher_attack("The New York Times"),
          publisher_attack("The Sun"), publisher_attack("National Enquirer")};
}

AttackSpec adversarial_rewrite_attack() {
  return {AttackSpec::Kind::kAdversarialRewrite, "adversarial_rewrite", ""};
}

AttackSpec summarization_attack() {
  return {AttackSpec::Kind::kSummarization, "summarization", ""};
}

AttackSpec in_context_attack(std::string example_article) {
  if (example_article.empty()) example_article = kBundledExemplarArticle;
  return {AttackSpec::Kind::kInContext, "in_context", std::move(example_article)};
}

std::vector<AttackSpec> attack_suite_from_name(const std::string& name) {
  if (name == "publishers") return publisher_attacks();
  if (name == "all") {
    auto out = publisher_attacks();
    out.push_back(adversarial_rewrite_attack());
    out.push_back(summarization_attack());
    out.push_back(in_context_attack());
    return out;
  }
  if (name.empty() || name == "none") return {};

  std::vector<AttackSpec> out;
  std::stringstream ss(name);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    if (part == "identity") out.push_back(identity_attack());
    else if (part == "adversarial_rewrite") out.push_back(adversarial_rewrite_attack());
    else if (part == "summarization") out.push_back(summarization_attack());
    else if (part == "in_context") out.push_back(in_context_attack());
    else if (part == "CNN" || part == "The New York Times" || part == "The Sun" ||
             part == "National Enquirer") out.push_back(publisher_attack(part));
    else throw std::invalid_argument("unknown attack '" + part + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report table

void ReportTable::add(std::string model, std::string attack, double fraction,
                      std::optional<double> auc) {
  cells.push_back({std::move(model), std::move(attack), fraction, auc});
}

const ReportCell* ReportTable::find(const std::string& attack) const {
  for (const auto& c : cells) {
    if (c.attack == attack) return &c;
  }
  return nullptr;
}

std::string ReportTable::to_csv() const {
  std::ostringstream out;
  out << "model,attack,fraction,auc\n";
  for (const auto& c : cells) {
    char num[64];
    std::snprintf(num, sizeof(num), "%.10g", c.fraction);
    out << c.model << ',' << c.attack << ',' << num << ',';
    if (c.auc) {
      std::snprintf(num, sizeof(num), "%.10g", *c.auc);
      out << num;
    } else {
      out << "failed";
    }
    out << '\n';
  }
  return out.str();
}

void ReportTable::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << to_csv();
}

// ---------------------------------------------------------------------------
// Conversion cache

namespace {
std::string cache_key(const std::string& tag, const std::string& id, const std::string& fp) {
  return tag + '\x1f' + id + '\x1f' + fp;
}
}  // namespace

ConversionCache::ConversionCache(std::string backing_path) : backing_path_(std::move(backing_path)) {
  std::ifstream in(backing_path_);
  if (!in) return;  // fresh cache file
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const json rec = json::parse(line);
    entries_[rec.at("key").get<std::string>()] = rec.at("text").get<std::string>();
  }
}

std::optional<std::string> ConversionCache::get(const std::string& tag, const std::string& item_id,
                                                const std::string& gateway_fingerprint) const {
  const auto it = entries_.find(cache_key(tag, item_id, gateway_fingerprint));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ConversionCache::put(const std::string& tag, const std::string& item_id,
                          const std::string& gateway_fingerprint, const std::string& text) {
  const std::string key = cache_key(tag, item_id, gateway_fingerprint);
  if (!entries_.emplace(key, text).second) return;
  if (!backing_path_.empty()) {
    std::ofstream out(backing_path_, std::ios::app);
    if (out) out << json{{"key", key}, {"text", text}}.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Wiring

std::shared_ptr<Gateway> make_gateway(const RunConfig& cfg) {
  if (cfg.gateway == "simulated") {
    return std::make_shared<SimulatedGateway>(cfg.gateway_seed);
  }
  if (cfg.gateway == "http") {
    HttpGateway::Options opts;
    return std::make_shared<HttpGateway>(std::move(opts));
  }
  if (cfg.gateway == "replay") {
    return std::make_shared<ReplayGateway>(cfg.fixture_path);
  }
  if (cfg.gateway == "record") {
    HttpGateway::Options opts;
    return std::make_shared<ReplayGateway>(cfg.fixture_path,
                                           std::make_shared<HttpGateway>(std::move(opts)));
  }
  throw std::invalid_argument("unknown gateway '" + cfg.gateway + "'");
}

namespace {

std::shared_ptr<Featurizer> make_featurizer(const std::string& kind, std::size_t dim,
                                            std::uint64_t hash_seed, const RunConfig& cfg) {
  if (kind == "hashed_ngram") {
    return std::make_shared<HashedNGramFeaturizer>(static_cast<Eigen::Index>(dim), 1, 2, hash_seed);
  }
  ExternalEmbeddingFeaturizer::Options opts;
  opts.base_url = cfg.external_base_url;
  opts.model = cfg.external_model;
  opts.dimension = static_cast<Eigen::Index>(cfg.external_dim);
  return std::make_shared<ExternalEmbeddingFeaturizer>(std::move(opts));
}

}  // namespace

std::shared_ptr<Featurizer> make_detector_featurizer(const RunConfig& cfg) {
  return make_featurizer(cfg.detector_featurizer, cfg.detector_dim, cfg.detector_hash_seed, cfg);
}

std::shared_ptr<Featurizer> make_embedder(const RunConfig& cfg) {
  return make_featurizer(cfg.embedder_featurizer, cfg.embedder_dim, cfg.embedder_hash_seed, cfg);
}

// ---------------------------------------------------------------------------
// Attack evaluation

namespace {

// Converts one test item under an attack. Throws GatewayCallError on
// transport failure; empty replies fall back at the call site, where they
// count against the attack's fallback budget.
std::string convert_under_attack(const AttackSpec& attack, const NewsItem& item, Gateway& gw) {
  const auto instruction_request = [&](const std::string& instruction) {
    ChatRequest req;
    ConversionPrompt p;
    p.instruction = instruction;
    req.user = render_style_request(p, item.text);
    return gw.chat(req);
  };
  switch (attack.kind) {
    case AttackSpec::Kind::kIdentity:
      return instruction_request("Repeat the following article unchanged");
    case AttackSpec::Kind::kPublisherStyle:
      return instruction_request(publisher_attack_instruction(attack.parameter));
    case AttackSpec::Kind::kSummarization:
      return instruction_request(summarization_attack_instruction());
    case AttackSpec::Kind::kInContext: {
      ChatRequest req;
      req.user = in_context_attack_request(attack.parameter, item.text);
      return gw.chat(req);
    }
    case AttackSpec::Kind::kAdversarialRewrite: {
      ChatRequest probe;
      probe.user = render_attack_probe_request(item.text);
      const auto verdict = parse_probe_verdict(gw.chat(probe));
      if (!verdict) return "";  // unparseable probe: let the caller fall back
      ChatRequest rewrite;
      rewrite.user = render_attack_rewrite_request(item.text, verdict->answer, verdict->reason,
                                                   item.label);
      return gw.chat(rewrite);
    }
  }
  return item.text;
}

}  // namespace

ReportTable run_attack_eval(const Detector& detector, const Dataset& test,
                            const std::vector<AttackSpec>& attacks, Gateway& gw,
                            const AttackEvalOptions& opts) {
  if (!test.has_both_classes()) {
    throw std::invalid_argument("run_attack_eval: test set must contain both classes");
  }

  ReportTable table;
  table.add(opts.model_name, "clean", opts.fraction, detector.evaluate(test));

  std::vector<double> attack_aucs;
  bool any_failed = false;
  for (const auto& attack : attacks) {
    Dataset converted;
    converted.name = test.name + "/" + attack.name;
    converted.items.reserve(test.size());
    std::size_t fallbacks = 0;
    for (const auto& item : test.items) {
      NewsItem out = item;
      std::optional<std::string> cached;
      if (opts.cache != nullptr) cached = opts.cache->get("attack:" + attack.name, item.id, gw.fingerprint());
      if (cached) {
        out.text = *cached;
      } else {
        std::string text;
        try {
          text = convert_under_attack(attack, item, gw);
        } catch (const GatewayCallError&) {
          text.clear();
        }
        if (trim(text).empty()) {
          ++fallbacks;
          text = item.text;
        } else if (opts.cache != nullptr) {
          opts.cache->put("attack:" + attack.name, item.id, gw.fingerprint(), text);
        }
        out.text = std::move(text);
      }
      converted.items.push_back(std::move(out));
    }

    const double fallback_fraction = static_cast<double>(fallbacks) / static_cast<double>(test.size());
    if (fallbacks > 0 && opts.warnings != nullptr) {
      opts.warnings->push_back("attack '" + attack.name + "': " + std::to_string(fallbacks) +
                               " items fell back to the original text");
    }
    if (fallback_fraction > opts.max_fallback_fraction) {
      table.add(opts.model_name, attack.name, opts.fraction, std::nullopt);
      any_failed = true;
      continue;
    }
    const double attack_auc = detector.evaluate(converted);
    attack_aucs.push_back(attack_auc);
    table.add(opts.model_name, attack.name, opts.fraction, attack_auc);
  }

  if (!attacks.empty()) {
    if (any_failed) {
      table.add(opts.model_name, "attack_average", opts.fraction, std::nullopt);
    } else {
      double sum = 0.0;
      for (double a : attack_aucs) sum += a;
      table.add(opts.model_name, "attack_average", opts.fraction,
                sum / static_cast<double>(attack_aucs.size()));
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Training runs

namespace {

enum class RunKind { kFull, kVanilla, kPredefined };

std::string run_kind_name(RunKind kind) {
  switch (kind) {
    case RunKind::kFull: return "full";
    case RunKind::kVanilla: return "vanilla";
    case RunKind::kPredefined: return "predefined_styles";
  }
  return "full";
}

RoundConfig round_config_from(const RunConfig& cfg) {
  RoundConfig rc;
  rc.candidates_per_round = cfg.candidates_per_round;
  rc.select_count = cfg.select_count;
  rc.probe_subset_size = cfg.probe_subset_size;
  rc.generation.high_threshold = cfg.bucket_high;
  rc.generation.medium_threshold = cfg.bucket_medium;
  rc.flip_threshold = cfg.flip_threshold;
  rc.trajectory_keeps_unselected = cfg.trajectory_keeps_unselected;
  rc.model = cfg.model;
  rc.selection = cfg.kmeanspp_d2_sampling ? SelectionMode::kD2Sampling : SelectionMode::kFarthestPoint;

  if (cfg.ablation == "random_selection") rc.selection = SelectionMode::kRandom;
  else if (cfg.ablation == "adversarial_only") rc.selection = SelectionMode::kAdversarialOnly;
  else if (cfg.ablation == "class_prompt") rc.generation.style = TrajectoryStyle::kClassBuckets;
  else if (cfg.ablation == "no_trajectory") rc.generation.style = TrajectoryStyle::kOmitted;
  else if (cfg.ablation == "no_adversarialness") rc.scaling.use_adversarialness = false;
  else if (cfg.ablation == "no_coherency") rc.scaling.use_coherency = false;
  return rc;
}

CandidateRecord record_from(const CandidateEvaluation& eval, bool selected) {
  CandidateRecord rec;
  rec.instruction = eval.prompt.instruction;
  rec.origin = eval.prompt.origin == ConversionPrompt::Origin::kSeedSet ? "seed" : "generated";
  rec.auc = eval.auc;
  rec.confusion = eval.confusion;
  rec.adversarialness = eval.adversarialness;
  rec.coherency = eval.coherency;
  rec.selected = selected;
  rec.flip_warning = eval.flip_warning;
  return rec;
}

void write_jsonl_dataset(const Dataset& d, const std::string& path) {
  save_dataset(d, path);
}

void write_candidate_artifacts(const std::string& dir, int round,
                               const std::vector<CandidateEvaluation>& evals,
                               const std::vector<std::size_t>& selected, const Featurizer& embedder) {
  fs::create_directories(dir);
  std::ofstream out(dir + "/round_" + std::to_string(round) + ".jsonl");
  if (!out) throw std::runtime_error("cannot write candidate artifacts for round " + std::to_string(round));
  std::vector<bool> is_selected(evals.size(), false);
  for (std::size_t idx : selected) is_selected[idx] = true;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    const auto& eval = evals[i];
    json j;
    j["instruction"] = eval.prompt.instruction;
    j["auc"] = eval.auc;
    j["confusion"] = eval.confusion;
    j["adversarialness"] = eval.adversarialness;
    j["coherency"] = eval.coherency;
    j["selected"] = static_cast<bool>(is_selected[i]);
    j["flip_warning"] = eval.flip_warning;
    json delta = json::array();
    for (Eigen::Index k = 0; k < eval.delta.size(); ++k) delta.push_back(eval.delta[k]);
    j["delta"] = std::move(delta);
    // mean per-pair embedding cosine between original and converted text
    double cosine_sum = 0.0;
    for (std::size_t p = 0; p < eval.batch.size(); ++p) {
      cosine_sum += cosine_similarity(embedder.featurize(eval.batch.original[p].text),
                                      embedder.featurize(eval.batch.converted[p].text));
    }
    j["pair_cosine"] = cosine_sum / static_cast<double>(eval.batch.size());
    out << j.dump() << '\n';
  }
}

void write_augmented_artifacts(const std::string& dir, int round,
                               const std::vector<std::tuple<std::string, std::string, std::string>>& rows) {
  fs::create_directories(dir);
  std::ofstream out(dir + "/round_" + std::to_string(round) + ".jsonl");
  if (!out) throw std::runtime_error("cannot write augmented artifacts for round " + std::to_string(round));
  for (const auto& [id, prompt_hash, text] : rows) {
    out << json{{"id", id}, {"round", round}, {"prompt_hash", prompt_hash}, {"text", text}}.dump()
        << '\n';
  }
}

struct PreparedRun {
  Dataset train;
  Dataset test;
  std::shared_ptr<Featurizer> detector_featurizer;
  std::shared_ptr<Featurizer> embedder;
  std::shared_ptr<Gateway> gateway;
};

PreparedRun prepare(const RunConfig& cfg, const Dataset& full) {
  PreparedRun p;
  auto [train, test] = split_dataset(full, cfg.train_fraction, cfg.seed);
  if (cfg.subsample_fraction < 1.0) {
    train = subsample(train, cfg.subsample_fraction, derive_seed(cfg.seed, "train-subsample"));
  }
  p.train = std::move(train);
  p.test = std::move(test);
  p.detector_featurizer = make_detector_featurizer(cfg);
  p.embedder = make_embedder(cfg);
  p.gateway = make_gateway(cfg);
  return p;
}

TrainConfig train_config_for_round(const RunConfig& cfg, std::uint64_t round_tag) {
  TrainConfig tc;
  tc.learning_rate = cfg.learning_rate;
  tc.batch_size = cfg.batch_size;
  tc.epochs_per_round = cfg.epochs_per_round;
  tc.weight_decay = cfg.weight_decay;
  tc.seed = derive_seed(cfg.seed, "train", round_tag);
  return tc;
}

// Convert the full training split with one prompt, via the cache.
Dataset convert_training_set(const Dataset& train, const ConversionPrompt& prompt, Gateway& gw,
                             ConversionCache& cache, std::vector<std::string>* warnings,
                             std::vector<std::tuple<std::string, std::string, std::string>>* artifact_rows) {
  const std::string phash = hash_hex(fnv1a(prompt.instruction));
  Dataset out;
  out.name = train.name + "/aug";
  out.items.reserve(train.size());
  for (const auto& item : train.items) {
    std::string text;
    if (auto cached = cache.get(prompt.instruction, item.id, gw.fingerprint())) {
      text = *cached;
    } else {
      try {
        text = apply_style(gw, prompt, item.text, warnings);
      } catch (const GatewayCallError& e) {
        throw GatewayCallError("augmentation failed for item '" + item.id + "': " + e.what());
      }
      cache.put(prompt.instruction, item.id, gw.fingerprint(), text);
    }
    NewsItem copy;
    copy.id = item.id + "#" + phash.substr(0, 8);
    copy.text = text;
    copy.label = item.label;
    if (artifact_rows != nullptr) artifact_rows->emplace_back(item.id, phash, text);
    out.items.push_back(std::move(copy));
  }
  return out;
}

void checkpoint(const std::string& out_dir, const RunManifest& manifest, const Detector& detector) {
  if (out_dir.empty()) return;
  fs::create_directories(out_dir);
  save_manifest(manifest, out_dir + "/manifest.json");
  detector.save(out_dir + "/detector.json");
}

RunOutputs run_loop(RunKind kind, const RunConfig& cfg, const Dataset& full,
                    const std::string& out_dir, const std::string& resume_dir) {
  cfg.validate();
  PreparedRun prep = prepare(cfg, full);
  Gateway& gw = *prep.gateway;

  RunManifest manifest;
  manifest.config = cfg.to_flat_map();
  manifest.config["run_kind"] = run_kind_name(kind);
  manifest.base_seed = cfg.seed;
  manifest.created_at = current_timestamp();

  Detector detector(prep.detector_featurizer);
  OptimizerState state(cfg.trajectory_capacity);
  RoundConfig round_cfg = round_config_from(cfg);
  ConversionCache cache;
  int start_round = 0;

  if (!resume_dir.empty()) {
    RunManifest loaded = load_manifest(resume_dir + "/manifest.json");
    auto expected = cfg.to_flat_map();
    expected["run_kind"] = run_kind_name(kind);
    if (loaded.config != expected) {
      throw std::runtime_error("resume: checkpoint config does not match the requested run");
    }
    detector = Detector::load(resume_dir + "/detector.json");
    for (const auto& t : loaded.trajectory) {
      PromptScoreRecord rec;
      rec.prompt.instruction = t.instruction;
      rec.prompt.round = t.round;
      rec.score = t.score;
      rec.round = t.round;
      state.trajectory.insert(rec);
    }
    start_round = loaded.rounds.empty() ? 0 : loaded.rounds.back().round + 1;
    state.next_round = start_round;
    manifest = std::move(loaded);
  } else {
    // Warmup pass on originals; with rounds == 0 this is the whole run.
    if (prep.train.empty()) throw std::runtime_error("run: empty training split");
    detector.train_epochs(prep.train, train_config_for_round(cfg, 0xfffffffful));
    if (kind == RunKind::kFull && cfg.rounds > 0) {
      seed_trajectory(state, detector, prep.train, *prep.embedder, gw, round_cfg, cfg.seed);
    }
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      write_jsonl_dataset(prep.train, out_dir + "/train_originals.jsonl");
      write_jsonl_dataset(prep.test, out_dir + "/test_set.jsonl");
    }
  }

  std::vector<Dataset> accumulated;
  for (int round = start_round; round < cfg.rounds; ++round) {
    RoundRecord record;
    record.round = round;
    std::vector<std::string> round_warnings;
    std::vector<ConversionPrompt> selected_prompts;

    if (kind == RunKind::kFull) {
      RoundResult rr = run_round(state, detector, prep.train, *prep.embedder, gw, round_cfg, cfg.seed);
      round_warnings = std::move(rr.warnings);
      std::vector<bool> is_selected(rr.evaluations.size(), false);
      for (std::size_t idx : rr.selected) is_selected[idx] = true;
      for (std::size_t i = 0; i < rr.evaluations.size(); ++i) {
        record.candidates.push_back(record_from(rr.evaluations[i], is_selected[i]));
      }
      for (std::size_t idx : rr.selected) {
        record.selected.push_back(rr.evaluations[idx].prompt.instruction);
        selected_prompts.push_back(rr.evaluations[idx].prompt);
      }
      if (!out_dir.empty()) {
        write_candidate_artifacts(out_dir + "/candidates", round, rr.evaluations, rr.selected,
                                  *prep.embedder);
      }
    } else if (kind == RunKind::kPredefined) {
      // Fixed tone prompts every round; scored for the record, no selection.
      const auto subset = sample_probe_subset(prep.train, cfg.probe_subset_size,
                                              derive_seed(cfg.seed, "round-probe",
                                                          static_cast<std::uint64_t>(round)));
      ScoreOptions score_opts;
      score_opts.flip_threshold = cfg.flip_threshold;
      for (const auto& prompt : predefined_tone_prompts()) {
        auto eval = score_candidate(prompt, subset, detector, *prep.embedder, gw, score_opts);
        attach_coherency(eval, gw, round_cfg.scaling);
        record.candidates.push_back(record_from(eval, true));
        record.selected.push_back(prompt.instruction);
        selected_prompts.push_back(prompt);
      }
    }
    // kVanilla: no prompts, no augmentation.

    Dataset round_train = prep.train;
    std::vector<std::tuple<std::string, std::string, std::string>> artifact_rows;
    std::vector<Dataset> fresh_augmented;
    for (const auto& prompt : selected_prompts) {
      fresh_augmented.push_back(convert_training_set(prep.train, prompt, gw, cache, &round_warnings,
                                                     out_dir.empty() ? nullptr : &artifact_rows));
    }
    if (cfg.accumulate_augmentations) {
      for (const auto& aug : accumulated) {
        round_train.items.insert(round_train.items.end(), aug.items.begin(), aug.items.end());
      }
    }
    for (auto& aug : fresh_augmented) {
      round_train.items.insert(round_train.items.end(), aug.items.begin(), aug.items.end());
      if (cfg.accumulate_augmentations) accumulated.push_back(std::move(aug));
    }
    if (!out_dir.empty() && !selected_prompts.empty()) {
      write_augmented_artifacts(out_dir + "/augmented", round, artifact_rows);
    }

    detector.train_epochs(round_train, train_config_for_round(cfg, static_cast<std::uint64_t>(round)));
    record.clean_auc = detector.evaluate(prep.test);

    if (cfg.eval_attacks_each_round) {
      AttackEvalOptions eval_opts;
      eval_opts.model_name = run_kind_name(kind);
      eval_opts.fraction = cfg.subsample_fraction;
      eval_opts.cache = &cache;
      eval_opts.warnings = &round_warnings;
      const ReportTable table = run_attack_eval(detector, prep.test, publisher_attacks(), gw, eval_opts);
      for (const auto& cell : table.cells) {
        if (cell.attack == "clean" || !cell.auc) continue;
        if (cell.attack == "attack_average") record.mean_attack_auc = *cell.auc;
        else record.attack_auc[cell.attack] = *cell.auc;
      }
    }

    manifest.trajectory.clear();
    for (const auto& rec : state.trajectory.records()) {
      manifest.trajectory.push_back({rec.prompt.instruction, rec.score, rec.round});
    }
    for (auto& w : round_warnings) manifest.warnings.push_back("round " + std::to_string(round) + ": " + w);
    manifest.rounds.push_back(std::move(record));
    manifest.finished_at = current_timestamp();
    checkpoint(out_dir, manifest, detector);
  }

  manifest.finished_at = current_timestamp();
  if (cfg.rounds == 0 || start_round >= cfg.rounds) checkpoint(out_dir, manifest, detector);
  manifest.validate();
  return {std::move(detector), std::move(manifest)};
}

}  // namespace

RunOutputs run_training(const RunConfig& cfg, const Dataset& full, const std::string& out_dir,
                        const std::string& resume_dir) {
  return run_loop(RunKind::kFull, cfg, full, out_dir, resume_dir);
}

RunOutputs run_training_from_path(const RunConfig& cfg, const std::string& out_dir,
                                  const std::string& resume_dir) {
  if (cfg.dataset_path.empty()) throw std::invalid_argument("run: dataset_path required");
  return run_training(cfg, load_dataset(cfg.dataset_path), out_dir, resume_dir);
}

RunOutputs run_baseline(const std::string& kind, const RunConfig& cfg, const Dataset& full,
                        const std::string& out_dir) {
  if (kind == "vanilla") return run_loop(RunKind::kVanilla, cfg, full, out_dir, {});
  if (kind == "predefined_styles") return run_loop(RunKind::kPredefined, cfg, full, out_dir, {});
  throw std::invalid_argument("unknown baseline '" + kind + "'");
}

RunOutputs run_ablation(const std::string& name, RunConfig cfg, const Dataset& full,
                        const std::string& out_dir) {
  cfg.ablation = name;
  cfg.validate();
  if (name == "none") throw std::invalid_argument("run_ablation: pick a non-trivial ablation");
  return run_loop(RunKind::kFull, cfg, full, out_dir, {});
}

}  // namespace advaug
