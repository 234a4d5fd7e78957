#include "advaug/config.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "advaug/text.hpp"

namespace advaug {

void RunConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("config: train_fraction must be in (0,1)");
  }
  if (!(subsample_fraction > 0.0 && subsample_fraction <= 1.0)) {
    throw std::invalid_argument("config: subsample_fraction must be in (0,1]");
  }
  if (rounds < 0 || epochs_per_round < 1) {
    throw std::invalid_argument("config: rounds must be >= 0 and epochs_per_round >= 1");
  }
  if (candidates_per_round < 1 || select_count < 1 || probe_subset_size < 2) {
    throw std::invalid_argument("config: candidate, selection, and probe sizes must be positive");
  }
  if (select_count > candidates_per_round) {
    throw std::invalid_argument("config: select_count cannot exceed candidates_per_round");
  }
  if (learning_rate <= 0 || batch_size < 1 || weight_decay < 0) {
    throw std::invalid_argument("config: bad optimizer settings");
  }
  if (trajectory_capacity < 1) {
    throw std::invalid_argument("config: trajectory_capacity must be >= 1");
  }
  if (gateway != "simulated" && gateway != "http" && gateway != "replay" && gateway != "record") {
    throw std::invalid_argument("config: unknown gateway '" + gateway + "'");
  }
  if ((gateway == "replay" || gateway == "record") && fixture_path.empty()) {
    throw std::invalid_argument("config: gateway '" + gateway + "' requires fixture_path");
  }
  if (detector_featurizer != "hashed_ngram" && detector_featurizer != "external") {
    throw std::invalid_argument("config: unknown detector_featurizer '" + detector_featurizer + "'");
  }
  if (embedder_featurizer != "hashed_ngram" && embedder_featurizer != "external") {
    throw std::invalid_argument("config: unknown embedder_featurizer '" + embedder_featurizer + "'");
  }
  if ((detector_featurizer == "external" || embedder_featurizer == "external") &&
      (external_base_url.empty() || external_dim == 0)) {
    throw std::invalid_argument("config: external featurizer requires external_base_url and external_dim");
  }
  static const char* kAblations[] = {"none",
                                     "random_selection",
                                     "class_prompt",
                                     "adversarial_only",
                                     "no_adversarialness",
                                     "no_coherency",
                                     "no_trajectory"};
  bool known = false;
  for (const char* a : kAblations) known = known || ablation == a;
  if (!known) throw std::invalid_argument("config: unknown ablation '" + ablation + "'");
}

namespace {

std::string strip_quotes(const std::string& v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\''))) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: key '" + key + "' expects a boolean, got '" + v + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  T out{};
  in >> out;
  if (in.fail() || !in.eof()) {
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = strip_quotes(trim(stripped.substr(eq + 1)));
    if (key.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty key");
    }
    out[key] = value;
  }
  return out;
}

void apply_overrides(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
  const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters = {
      {"dataset_path", [&](const std::string&, const std::string& v) { cfg.dataset_path = v; }},
      {"train_fraction",
       [&](const std::string& k, const std::string& v) { cfg.train_fraction = parse_number<double>(k, v); }},
      {"subsample_fraction",
       [&](const std::string& k, const std::string& v) { cfg.subsample_fraction = parse_number<double>(k, v); }},
      {"rounds", [&](const std::string& k, const std::string& v) { cfg.rounds = parse_number<int>(k, v); }},
      {"epochs_per_round",
       [&](const std::string& k, const std::string& v) { cfg.epochs_per_round = parse_number<int>(k, v); }},
      {"candidates_per_round",
       [&](const std::string& k, const std::string& v) {
         cfg.candidates_per_round = parse_number<std::size_t>(k, v);
       }},
      {"select_count",
       [&](const std::string& k, const std::string& v) { cfg.select_count = parse_number<std::size_t>(k, v); }},
      {"probe_subset_size",
       [&](const std::string& k, const std::string& v) {
         cfg.probe_subset_size = parse_number<std::size_t>(k, v);
       }},
      {"seed", [&](const std::string& k, const std::string& v) { cfg.seed = parse_number<std::uint64_t>(k, v); }},
      {"gateway", [&](const std::string&, const std::string& v) { cfg.gateway = v; }},
      {"fixture_path", [&](const std::string&, const std::string& v) { cfg.fixture_path = v; }},
      {"model", [&](const std::string&, const std::string& v) { cfg.model = v; }},
      {"gateway_seed",
       [&](const std::string& k, const std::string& v) { cfg.gateway_seed = parse_number<std::uint64_t>(k, v); }},
      {"detector_featurizer", [&](const std::string&, const std::string& v) { cfg.detector_featurizer = v; }},
      {"detector_dim",
       [&](const std::string& k, const std::string& v) { cfg.detector_dim = parse_number<std::size_t>(k, v); }},
      {"detector_hash_seed",
       [&](const std::string& k, const std::string& v) {
         cfg.detector_hash_seed = parse_number<std::uint64_t>(k, v);
       }},
      {"embedder_featurizer", [&](const std::string&, const std::string& v) { cfg.embedder_featurizer = v; }},
      {"embedder_dim",
       [&](const std::string& k, const std::string& v) { cfg.embedder_dim = parse_number<std::size_t>(k, v); }},
      {"embedder_hash_seed",
       [&](const std::string& k, const std::string& v) {
         cfg.embedder_hash_seed = parse_number<std::uint64_t>(k, v);
       }},
      {"external_base_url", [&](const std::string&, const std::string& v) { cfg.external_base_url = v; }},
      {"external_model", [&](const std::string&, const std::string& v) { cfg.external_model = v; }},
      {"external_dim",
       [&](const std::string& k, const std::string& v) { cfg.external_dim = parse_number<std::size_t>(k, v); }},
      {"learning_rate",
       [&](const std::string& k, const std::string& v) { cfg.learning_rate = parse_number<double>(k, v); }},
      {"batch_size",
       [&](const std::string& k, const std::string& v) { cfg.batch_size = parse_number<std::size_t>(k, v); }},
      {"weight_decay",
       [&](const std::string& k, const std::string& v) { cfg.weight_decay = parse_number<double>(k, v); }},
      {"trajectory_capacity",
       [&](const std::string& k, const std::string& v) {
         cfg.trajectory_capacity = parse_number<std::size_t>(k, v);
       }},
      {"flip_threshold",
       [&](const std::string& k, const std::string& v) { cfg.flip_threshold = parse_number<double>(k, v); }},
      {"bucket_high",
       [&](const std::string& k, const std::string& v) { cfg.bucket_high = parse_number<double>(k, v); }},
      {"bucket_medium",
       [&](const std::string& k, const std::string& v) { cfg.bucket_medium = parse_number<double>(k, v); }},
      {"ablation", [&](const std::string&, const std::string& v) { cfg.ablation = v; }},
      {"kmeanspp_d2_sampling",
       [&](const std::string& k, const std::string& v) { cfg.kmeanspp_d2_sampling = parse_bool(k, v); }},
      {"trajectory_keeps_unselected",
       [&](const std::string& k, const std::string& v) {
         cfg.trajectory_keeps_unselected = parse_bool(k, v);
       }},
      {"accumulate_augmentations",
       [&](const std::string& k, const std::string& v) { cfg.accumulate_augmentations = parse_bool(k, v); }},
      {"eval_attacks_each_round",
       [&](const std::string& k, const std::string& v) { cfg.eval_attacks_each_round = parse_bool(k, v); }},
  };

  for (const auto& [key, value] : kv) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    it->second(key, value);
  }
}

RunConfig run_config_from_map(const std::map<std::string, std::string>& kv) {
  RunConfig cfg;
  apply_overrides(cfg, kv);
  cfg.validate();
  return cfg;
}

std::map<std::string, std::string> RunConfig::to_flat_map() const {
  std::map<std::string, std::string> out;
  const auto num = [](auto v) { return std::to_string(v); };
  const auto real = [](double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  };
  out["dataset_path"] = dataset_path;
  out["train_fraction"] = real(train_fraction);
  out["subsample_fraction"] = real(subsample_fraction);
  out["rounds"] = num(rounds);
  out["epochs_per_round"] = num(epochs_per_round);
  out["candidates_per_round"] = num(candidates_per_round);
  out["select_count"] = num(select_count);
  out["probe_subset_size"] = num(probe_subset_size);
  out["seed"] = num(seed);
  out["gateway"] = gateway;
  out["fixture_path"] = fixture_path;
  out["model"] = model;
  out["gateway_seed"] = num(gateway_seed);
  out["detector_featurizer"] = detector_featurizer;
  out["detector_dim"] = num(detector_dim);
  out["detector_hash_seed"] = num(detector_hash_seed);
  out["embedder_featurizer"] = embedder_featurizer;
  out["embedder_dim"] = num(embedder_dim);
  out["embedder_hash_seed"] = num(embedder_hash_seed);
  out["external_base_url"] = external_base_url;
  out["external_model"] = external_model;
  out["external_dim"] = num(external_dim);
  out["learning_rate"] = real(learning_rate);
  out["batch_size"] = num(batch_size);
  out["weight_decay"] = real(weight_decay);
  out["trajectory_capacity"] = num(trajectory_capacity);
  out["flip_threshold"] = real(flip_threshold);
  out["bucket_high"] = real(bucket_high);
  out["bucket_medium"] = real(bucket_medium);
  out["ablation"] = ablation;
  out["kmeanspp_d2_sampling"] = kmeanspp_d2_sampling ? "true" : "false";
  out["trajectory_keeps_unselected"] = trajectory_keeps_unselected ? "true" : "false";
  out["accumulate_augmentations"] = accumulate_augmentations ? "true" : "false";
  out["eval_attacks_each_round"] = eval_attacks_each_round ? "true" : "false";
  return out;
}

}  // namespace advaug
