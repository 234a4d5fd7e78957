#pragma once

#include <cstdint>

#include "advaug/types.hpp"

namespace advaug {

// Desk-scale stand-in for a real fake-news corpus. Content tokens carry the
// true label (two disjoint vocabularies plus shared filler); tone markers
// from the tabloid/sober lexica decorate each article and agree with the
// label only at `style_correlation`, so a detector can pick up the spurious
// style cue and be punished for it under a restyling attack.
struct SynthConfig {
  std::size_t items = 200;
  std::uint64_t seed = 1;
  // probability that a fake article wears tabloid markers (and a real one
  // sober markers) rather than the swapped family
  double style_correlation = 0.9;
  // probability that each content slot draws from the label's own vocabulary
  // instead of the shared pool; 0 makes content uninformative
  double content_separability = 1.0;
  int min_sentences = 3;
  int max_sentences = 5;
};

Dataset generate_synthetic_benchmark(const SynthConfig& cfg);

}  // namespace advaug
