#include "advaug/manifest.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace advaug {

using nlohmann::json;

void RunManifest::validate() const {
  int last_round = -1;
  for (const auto& r : rounds) {
    if (r.round <= last_round) {
      throw std::runtime_error("manifest: round indices must be strictly increasing");
    }
    last_round = r.round;
    for (const auto& sel : r.selected) {
      const bool found = std::any_of(r.candidates.begin(), r.candidates.end(),
                                     [&](const CandidateRecord& c) { return c.instruction == sel; });
      if (!found) {
        throw std::runtime_error("manifest: selected prompt not among round " +
                                 std::to_string(r.round) + " candidates: " + sel);
      }
    }
  }
}

namespace {

json to_json(const CandidateRecord& c) {
  json j;
  j["instruction"] = c.instruction;
  j["origin"] = c.origin;
  j["auc"] = c.auc;
  j["confusion"] = c.confusion;
  j["adversarialness"] = c.adversarialness;
  j["coherency"] = c.coherency;
  j["selected"] = c.selected;
  j["flip_warning"] = c.flip_warning;
  return j;
}

CandidateRecord candidate_from_json(const json& j) {
  CandidateRecord c;
  c.instruction = j.at("instruction").get<std::string>();
  c.origin = j.at("origin").get<std::string>();
  c.auc = j.at("auc").get<double>();
  c.confusion = j.at("confusion").get<double>();
  c.adversarialness = j.at("adversarialness").get<double>();
  c.coherency = j.at("coherency").get<double>();
  c.selected = j.at("selected").get<bool>();
  c.flip_warning = j.at("flip_warning").get<bool>();
  return c;
}

json to_json(const RoundRecord& r) {
  json j;
  j["round"] = r.round;
  j["candidates"] = json::array();
  for (const auto& c : r.candidates) j["candidates"].push_back(to_json(c));
  j["selected"] = r.selected;
  j["clean_auc"] = r.clean_auc;
  if (r.mean_attack_auc) j["mean_attack_auc"] = *r.mean_attack_auc;
  if (!r.attack_auc.empty()) j["attack_auc"] = r.attack_auc;
  return j;
}

RoundRecord round_from_json(const json& j) {
  RoundRecord r;
  r.round = j.at("round").get<int>();
  for (const auto& c : j.at("candidates")) r.candidates.push_back(candidate_from_json(c));
  r.selected = j.at("selected").get<std::vector<std::string>>();
  r.clean_auc = j.at("clean_auc").get<double>();
  if (j.contains("mean_attack_auc")) r.mean_attack_auc = j.at("mean_attack_auc").get<double>();
  if (j.contains("attack_auc")) r.attack_auc = j.at("attack_auc").get<std::map<std::string, double>>();
  return r;
}

}  // namespace

void save_manifest(const RunManifest& m, const std::string& path) {
  m.validate();
  json j;
  j["schema_version"] = m.schema_version;
  j["config"] = m.config;
  j["base_seed"] = m.base_seed;
  j["rounds"] = json::array();
  for (const auto& r : m.rounds) j["rounds"].push_back(to_json(r));
  j["trajectory"] = json::array();
  for (const auto& t : m.trajectory) {
    j["trajectory"].push_back({{"instruction", t.instruction}, {"score", t.score}, {"round", t.round}});
  }
  j["created_at"] = m.created_at;
  j["finished_at"] = m.finished_at;
  j["warnings"] = m.warnings;

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write manifest: " + path);
  }
  out << j.dump(2) << '\n';
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open manifest: " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("manifest parse error in " + path + ": " + e.what());
  }
  const int version = j.at("schema_version").get<int>();
  if (version != kManifestSchemaVersion) {
    throw std::runtime_error("manifest schema version mismatch: expected " +
                             std::to_string(kManifestSchemaVersion) + ", found " +
                             std::to_string(version));
  }
  RunManifest m;
  m.schema_version = version;
  m.config = j.at("config").get<std::map<std::string, std::string>>();
  m.base_seed = j.at("base_seed").get<std::uint64_t>();
  for (const auto& r : j.at("rounds")) m.rounds.push_back(round_from_json(r));
  for (const auto& t : j.at("trajectory")) {
    m.trajectory.push_back({t.at("instruction").get<std::string>(), t.at("score").get<double>(),
                            t.at("round").get<int>()});
  }
  m.created_at = j.at("created_at").get<std::string>();
  m.finished_at = j.at("finished_at").get<std::string>();
  m.warnings = j.at("warnings").get<std::vector<std::string>>();
  m.validate();
  return m;
}

std::string current_timestamp() {
  std::time_t t = 0;
  if (const char* fixed = std::getenv("SOURCE_DATE_EPOCH"); fixed != nullptr) {
    t = static_cast<std::time_t>(std::strtoll(fixed, nullptr, 10));
  } else {
    t = std::time(nullptr);
  }
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace advaug
