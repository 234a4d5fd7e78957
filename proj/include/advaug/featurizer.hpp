#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace advaug {

// Transient failure talking to an external service; safe to retry.
struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Maps text to a fixed-dimension vector. Implementations must be
// deterministic per (featurizer, text) and safe for concurrent calls.
class Featurizer {
 public:
  virtual ~Featurizer() = default;

  virtual Eigen::Index dimension() const = 0;
  virtual Eigen::VectorXd featurize(std::string_view text) const = 0;

  // Batch hook; the external variant overrides this with one request.
  virtual std::vector<Eigen::VectorXd> featurize_batch(const std::vector<std::string>& texts) const {
    std::vector<Eigen::VectorXd> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(featurize(t));
    return out;
  }

  // Configuration snapshot, sufficient to reconstruct via featurizer_from_json.
  virtual nlohmann::json config() const = 0;
};

// Bag of hashed word n-grams with signed hashing (a hash bit selects +-1,
// which keeps collisions unbiased in expectation) and L2 normalization.
// hash_seed decorrelates independent instances, e.g. the detector featurizer
// from the selection embedder.
class HashedNGramFeaturizer final : public Featurizer {
 public:
  explicit HashedNGramFeaturizer(Eigen::Index dimension = 1 << 16, int min_order = 1,
                                 int max_order = 2, std::uint64_t hash_seed = 0);

  Eigen::Index dimension() const override { return dimension_; }
  Eigen::VectorXd featurize(std::string_view text) const override;
  nlohmann::json config() const override;

 private:
  Eigen::Index dimension_;
  int min_order_;
  int max_order_;
  std::uint64_t hash_seed_;
};

// Client for an embeddings endpoint speaking the de-facto shape:
// POST {"model": ..., "input": [...]} -> {"data": [{"embedding": [...]}, ...]}
// in input order. Transport failures surface as TransportError after bounded
// retries; a dimension disagreement with the configured value is fatal.
class ExternalEmbeddingFeaturizer final : public Featurizer {
 public:
  struct Options {
    std::string base_url;                 // e.g. "http://localhost:8080"
    std::string path = "/v1/embeddings";
    std::string model;
    Eigen::Index dimension = 0;
    std::string api_key;  // empty: taken from LLM_API_KEY
    int max_retries = 3;
    int timeout_seconds = 30;
  };

  explicit ExternalEmbeddingFeaturizer(Options opts);

  Eigen::Index dimension() const override { return opts_.dimension; }
  Eigen::VectorXd featurize(std::string_view text) const override;
  std::vector<Eigen::VectorXd> featurize_batch(const std::vector<std::string>& texts) const override;
  nlohmann::json config() const override;

 private:
  Options opts_;
};

std::shared_ptr<Featurizer> featurizer_from_json(const nlohmann::json& j);

}  // namespace advaug
