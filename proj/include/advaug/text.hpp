#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace advaug {

// Word tokenizer shared by the featurizer, the lexical statistics, and the
// gateway simulator: lowercase, split on whitespace, strip leading/trailing
// punctuation. Tokens that are pure punctuation are dropped.
std::vector<std::string> tokenize(std::string_view text);

// Lowercased tokens with stopwords removed, as a set ("content core").
std::unordered_set<std::string> content_token_set(std::string_view text);

// Lowercased tokens with stopwords removed, multiset order preserved.
std::vector<std::string> content_tokens(std::string_view text);

bool is_stopword(const std::string& lowercase_token);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// FNV-1a, the deterministic hash used for feature indices, simulator rule
// dispatch, prompt fingerprints, and replay keys. Not std::hash: feature
// layouts and fixture keys must be stable across platforms and builds.
constexpr std::uint64_t fnv1a(std::string_view s, std::uint64_t seed = 1469598103934665603ull) {
  std::uint64_t h = seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h);

// Deterministic RNG helpers. std::shuffle and the distribution classes are
// implementation-defined; these draws are pinned so seeds reproduce exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform draw in [0, n), rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t n);

  // Uniform real in [0, 1).
  double uniform();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
      std::size_t j = static_cast<std::size_t>(below(i + 1));
      std::swap(v[i], v[j]);
    }
  }

  // Index into a non-empty weight vector, probability proportional to weight.
  std::size_t weighted_pick(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
};

// Stable derivation of per-round / per-purpose seeds from one base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view purpose, std::uint64_t index = 0) {
  std::uint64_t h = fnv1a(purpose, base ^ 0x9e3779b97f4a7c15ull);
  h ^= index + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

}  // namespace advaug
