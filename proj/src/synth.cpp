#include "advaug/synth.hpp"

#include <cctype>
#include <cstdio>

#include "advaug/style_lexicon.hpp"
#include "advaug/text.hpp"

namespace advaug {

namespace {

// Content vocabularies. None of these words may appear in the stopword or
// style lexica; they are the meaning the coherency judge protects.
const std::vector<std::string>& fake_content_pool() {
  static const std::vector<std::string> kPool = {
      "asteroid", "miracle",  "conspiracy", "aliens",   "microchip", "prophecy",
      "elixir",   "sighting", "cabal",      "antidote", "vortex",    "curse",
  };
  return kPool;
}

const std::vector<std::string>& real_content_pool() {
  static const std::vector<std::string> kPool = {
      "budget",  "council",     "infrastructure", "legislation", "committee", "election",
      "transit", "agriculture", "curriculum",     "census",      "tariff",    "audit",
  };
  return kPool;
}

const std::vector<std::string>& shared_content_pool() {
  static const std::vector<std::string> kPool = {
      "city",    "community", "residents", "project", "program", "meeting",
      "federal", "regional",  "annual",    "funding", "water",   "energy",
      "health",  "education", "district",  "valley",
  };
  return kPool;
}

std::string capitalized(std::string word) {
  if (!word.empty()) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
  return word;
}

}  // namespace

Dataset generate_synthetic_benchmark(const SynthConfig& cfg) {
  if (cfg.items < 4) throw std::invalid_argument("synthetic benchmark: need at least 4 items");
  if (cfg.min_sentences < 1 || cfg.max_sentences < cfg.min_sentences) {
    throw std::invalid_argument("synthetic benchmark: bad sentence range");
  }
  if (cfg.style_correlation < 0 || cfg.style_correlation > 1 || cfg.content_separability < 0 ||
      cfg.content_separability > 1) {
    throw std::invalid_argument("synthetic benchmark: probabilities must be in [0,1]");
  }

  Rng rng(derive_seed(cfg.seed, "synth"));
  Dataset out;
  out.name = "synthetic";
  out.items.reserve(cfg.items);

  for (std::size_t i = 0; i < cfg.items; ++i) {
    const Label label = (i % 2 == 0) ? Label::kFake : Label::kReal;
    const bool style_agrees = rng.uniform() < cfg.style_correlation;
    const bool tabloid = (label == Label::kFake) == style_agrees;
    const auto& style_pool = tabloid ? tabloid_style_lexicon() : sober_style_lexicon();
    const auto& own_pool = label == Label::kFake ? fake_content_pool() : real_content_pool();

    const int sentences =
        cfg.min_sentences + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                                cfg.max_sentences - cfg.min_sentences + 1)));
    // one label-carrying claim per article, buried under abundant tone
    // decoration; style is the easy shortcut, content the thin true signal
    const int content_sentence = static_cast<int>(rng.below(static_cast<std::uint64_t>(sentences)));
    std::string text;
    for (int s = 0; s < sentences; ++s) {
      const std::string style_a = style_pool[rng.below(style_pool.size())];
      const std::string style_b = style_pool[rng.below(style_pool.size())];
      const std::string style_c = style_pool[rng.below(style_pool.size())];
      std::string filler;
      if (s == content_sentence) {
        const bool separable = rng.uniform() < cfg.content_separability;
        const auto& content_pool = separable ? own_pool : shared_content_pool();
        filler = content_pool[rng.below(content_pool.size())];
      } else {
        filler = shared_content_pool()[rng.below(shared_content_pool().size())];
      }
      const std::string shared_a = shared_content_pool()[rng.below(shared_content_pool().size())];
      const std::string shared_b = shared_content_pool()[rng.below(shared_content_pool().size())];

      std::string sentence;
      switch (rng.below(3)) {
        case 0:
          sentence = capitalized(style_a) + " " + shared_a + " " + style_b + " " + filler + " " +
                     style_c + " " + shared_b + " .";
          break;
        case 1:
          sentence = capitalized(shared_a) + " " + style_a + " " + style_b + " " + filler + " " +
                     shared_b + " " + style_c + " .";
          break;
        default:
          sentence = capitalized(style_a) + " " + style_b + " " + shared_a + " " + filler + " " +
                     style_c + " " + shared_b + " .";
          break;
      }
      if (s > 0) text += ' ';
      text += sentence;
    }

    NewsItem item;
    char id[32];
    std::snprintf(id, sizeof(id), "synth-%05zu", i);
    item.id = id;
    item.text = std::move(text);
    item.label = label;
    out.items.push_back(std::move(item));
  }
  return out;
}

}  // namespace advaug
