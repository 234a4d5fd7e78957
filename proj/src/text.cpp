#include "advaug/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace advaug {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_punct(unsigned char c) { return std::ispunct(c) != 0; }

// Function words plus the filler/tone lexicon the simulator is free to
// rewrite. Anything here is ignored by the coherency judge and by content
// comparisons; only the remaining tokens count as meaning.
const std::unordered_set<std::string>& stopword_set() {
  static const std::unordered_set<std::string> kStopwords = {
      // function words
      "a", "an", "the", "and", "or", "but", "if", "then", "else", "so", "thus",
      "plus", "yet", "now", "currently", "this", "that", "these", "those", "is",
      "are", "was", "were", "be", "been", "being", "of", "in", "on", "at", "to",
      "for", "with", "as", "by", "it", "its", "from", "we", "you", "they", "he",
      "she", "i", "me", "my", "our", "your", "their", "not", "no", "yes", "do",
      "does", "did", "have", "has", "had", "will", "would", "shall", "should",
      "can", "could", "may", "might", "must", "here", "there", "what", "which",
      "who", "whom", "when", "where", "why", "how", "all", "any", "both",
      "each", "few", "more", "most", "other", "some", "such", "than", "too",
      "very", "really", "just", "about", "into", "over", "under", "again",
      "also", "only", "own", "same", "up", "down", "out", "off", "once",
      // exclamatory filler the boilerplate rules insert
      "oh", "well", "um", "folks", "indeed", "truly", "honestly", "breaking",
      "news", "update", "updated", "report", "reports", "reportedly", "sources",
      "say", "says", "said",
      // tone-marker lexicon (rewritable style decoration, not content)
      "shocking", "unbelievable", "sensational", "outrageous", "explosive",
      "stunning", "jaw-dropping", "scandalous", "dramatic", "exclusive",
      "incredible", "bombshell", "allegedly", "officials", "according",
      "statement", "spokesperson", "confirmed", "announced", "stated",
      "documented", "measured", "reviewed", "verified", "analysis",
      "apparently", "notably", "moreover", "furthermore", "meanwhile",
  };
  return kStopwords;
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && is_space(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < n && !is_space(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      std::size_t b = i;
      std::size_t e = j;
      while (b < e && is_punct(static_cast<unsigned char>(text[b]))) ++b;
      while (e > b && is_punct(static_cast<unsigned char>(text[e - 1]))) --e;
      if (e > b) {
        tokens.push_back(to_lower(text.substr(b, e - b)));
      }
    }
    i = j;
  }
  return tokens;
}

bool is_stopword(const std::string& lowercase_token) {
  return stopword_set().count(lowercase_token) > 0;
}

std::vector<std::string> content_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto& tok : tokenize(text)) {
    if (!is_stopword(tok)) out.push_back(std::move(tok));
  }
  return out;
}

std::unordered_set<std::string> content_token_set(std::string_view text) {
  auto toks = content_tokens(text);
  return {toks.begin(), toks.end()};
}

std::string hash_hex(std::uint64_t h) {
  static const char* kDigits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

double Rng::uniform() {
  // 53-bit mantissa draw.
  return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
}

std::size_t Rng::weighted_pick(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w > 0 ? w : 0;
  if (total <= 0) return below(weights.size());
  double x = uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i] > 0 ? weights[i] : 0;
    if (x < w) return i;
    x -= w;
  }
  return weights.size() - 1;
}

}  // namespace advaug
