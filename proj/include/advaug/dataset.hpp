#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "advaug/types.hpp"

namespace advaug {

// Reads a UTF-8 JSONL file, one object per line with fields `id` (string),
// `text` (string), `label` (integer 0/1). File order is preserved. Throws on
// a malformed line (naming the line number), a duplicate id, or an empty file.
Dataset load_dataset(const std::string& path);

// Writes the same format back out.
void save_dataset(const Dataset& d, const std::string& path);

// Seeded stratified partition. Per-class train counts are allocated by
// largest remainder, so every class proportion lands within one item of
// train_fraction. Item order within each part follows the source dataset.
std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double train_fraction, std::uint64_t seed);

// Seeded stratified subset of size round(fraction * N). fraction == 1 returns
// the dataset unchanged.
Dataset subsample(const Dataset& d, double fraction, std::uint64_t seed);

}  // namespace advaug
