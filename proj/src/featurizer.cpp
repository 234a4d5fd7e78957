#include "advaug/featurizer.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "advaug/text.hpp"

namespace advaug {

using nlohmann::json;

HashedNGramFeaturizer::HashedNGramFeaturizer(Eigen::Index dimension, int min_order, int max_order,
                                             std::uint64_t hash_seed)
    : dimension_(dimension), min_order_(min_order), max_order_(max_order), hash_seed_(hash_seed) {
  if (dimension_ < 2) throw std::invalid_argument("featurizer: dimension must be >= 2");
  if (min_order_ < 1 || max_order_ < min_order_) {
    throw std::invalid_argument("featurizer: invalid n-gram order range");
  }
}

Eigen::VectorXd HashedNGramFeaturizer::featurize(std::string_view text) const {
  if (trim(text).empty()) {
    throw std::invalid_argument("featurize: empty text");
  }
  const auto tokens = tokenize(text);
  if (tokens.empty()) {
    throw std::invalid_argument("featurize: text has no word tokens");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dimension_);
  std::string key;
  for (int order = min_order_; order <= max_order_; ++order) {
    const std::size_t n = static_cast<std::size_t>(order);
    if (tokens.size() < n) continue;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      key.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) key.push_back('\x1f');
        key += tokens[i + j];
      }
      const std::uint64_t h = fnv1a(key, hash_seed_ ^ fnv1a("ngram"));
      const auto idx = static_cast<Eigen::Index>(h % static_cast<std::uint64_t>(dimension_));
      v[idx] += (h >> 63) ? -1.0 : 1.0;
    }
  }
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

json HashedNGramFeaturizer::config() const {
  return json{{"kind", "hashed_ngram"},
              {"dimension", dimension_},
              {"min_order", min_order_},
              {"max_order", max_order_},
              {"hash_seed", hash_seed_}};
}

ExternalEmbeddingFeaturizer::ExternalEmbeddingFeaturizer(Options opts) : opts_(std::move(opts)) {
  if (opts_.base_url.empty()) throw std::invalid_argument("external featurizer: base_url required");
  if (opts_.dimension < 1) throw std::invalid_argument("external featurizer: dimension required");
  if (opts_.api_key.empty()) {
    if (const char* key = std::getenv("LLM_API_KEY")) opts_.api_key = key;
  }
}

std::vector<Eigen::VectorXd> ExternalEmbeddingFeaturizer::featurize_batch(
    const std::vector<std::string>& texts) const {
  if (texts.empty()) return {};
  json body;
  body["model"] = opts_.model;
  body["input"] = texts;
  const std::string payload = body.dump();

  std::string reply;
  std::string last_error;
  for (int attempt = 0; attempt <= opts_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100 * (1 << (attempt - 1))));
    }
    httplib::Client client(opts_.base_url);
    client.set_read_timeout(opts_.timeout_seconds, 0);
    client.set_connection_timeout(opts_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!opts_.api_key.empty()) headers.emplace("Authorization", "Bearer " + opts_.api_key);
    auto res = client.Post(opts_.path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "server status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw std::runtime_error("embedding request rejected with status " +
                               std::to_string(res->status) + ": " + res->body);
    }
    reply = res->body;
    break;
  }
  if (reply.empty()) {
    throw TransportError("embedding request failed after " + std::to_string(opts_.max_retries + 1) +
                         " attempts: " + last_error);
  }

  json parsed;
  try {
    parsed = json::parse(reply);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("embedding response is not valid JSON: ") + e.what());
  }
  const auto& data = parsed.at("data");
  if (data.size() != texts.size()) {
    throw std::runtime_error("embedding response count mismatch: sent " +
                             std::to_string(texts.size()) + ", got " + std::to_string(data.size()));
  }
  std::vector<Eigen::VectorXd> out;
  out.reserve(texts.size());
  for (const auto& entry : data) {
    const auto& emb = entry.at("embedding");
    if (static_cast<Eigen::Index>(emb.size()) != opts_.dimension) {
      throw std::runtime_error("embedding dimension mismatch: expected " +
                               std::to_string(opts_.dimension) + ", got " +
                               std::to_string(emb.size()));
    }
    Eigen::VectorXd v(opts_.dimension);
    for (Eigen::Index i = 0; i < opts_.dimension; ++i) v[i] = emb[static_cast<std::size_t>(i)].get<double>();
    out.push_back(std::move(v));
  }
  return out;
}

Eigen::VectorXd ExternalEmbeddingFeaturizer::featurize(std::string_view text) const {
  if (trim(text).empty()) {
    throw std::invalid_argument("featurize: empty text");
  }
  return featurize_batch({std::string(text)}).front();
}

json ExternalEmbeddingFeaturizer::config() const {
  return json{{"kind", "external"},
              {"base_url", opts_.base_url},
              {"path", opts_.path},
              {"model", opts_.model},
              {"dimension", opts_.dimension},
              {"max_retries", opts_.max_retries},
              {"timeout_seconds", opts_.timeout_seconds}};
}

std::shared_ptr<Featurizer> featurizer_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "hashed_ngram") {
    return std::make_shared<HashedNGramFeaturizer>(
        j.at("dimension").get<Eigen::Index>(), j.at("min_order").get<int>(),
        j.at("max_order").get<int>(), j.at("hash_seed").get<std::uint64_t>());
  }
  if (kind == "external") {
    ExternalEmbeddingFeaturizer::Options opts;
    opts.base_url = j.at("base_url").get<std::string>();
    opts.path = j.at("path").get<std::string>();
    opts.model = j.at("model").get<std::string>();
    opts.dimension = j.at("dimension").get<Eigen::Index>();
    if (j.contains("max_retries")) opts.max_retries = j.at("max_retries").get<int>();
    if (j.contains("timeout_seconds")) opts.timeout_seconds = j.at("timeout_seconds").get<int>();
    return std::make_shared<ExternalEmbeddingFeaturizer>(std::move(opts));
  }
  throw std::invalid_argument("unknown featurizer kind: " + kind);
}

}  // namespace advaug
