#pragma once

#include <string>
#include <vector>

namespace advaug {

// Tone-marker vocabularies shared by the gateway simulator, the synthetic
// benchmark generator, and the simulated zero-shot judge. Every word here is
// also a stopword, so rewriting tone markers never changes the content core
// of a text.
const std::vector<std::string>& tabloid_style_lexicon();
const std::vector<std::string>& sober_style_lexicon();

// Neutral filler used when a transform strips tone instead of replacing it.
const std::vector<std::string>& filler_lexicon();

bool is_tabloid_style_token(const std::string& lowercase_token);
bool is_sober_style_token(const std::string& lowercase_token);
bool is_style_token(const std::string& lowercase_token);

}  // namespace advaug
