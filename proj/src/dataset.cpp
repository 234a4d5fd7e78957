#include "advaug/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "advaug/text.hpp"

namespace advaug {

using nlohmann::json;

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file: " + path);
  }
  Dataset out;
  out.name = path;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed JSON: " + e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("text") || !rec.contains("label")) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": record must contain id, text, label");
    }
    NewsItem item;
    try {
      item.id = rec.at("id").get<std::string>();
      item.text = rec.at("text").get<std::string>();
      item.label = label_from_int(rec.at("label").get<int>());
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (trim(item.text).empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty text");
    }
    if (!seen_ids.insert(item.id).second) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": duplicate id '" + item.id + "'");
    }
    out.items.push_back(std::move(item));
  }
  if (out.items.empty()) {
    throw std::runtime_error("empty dataset: " + path);
  }
  return out;
}

void save_dataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write dataset file: " + path);
  }
  for (const auto& item : d.items) {
    json rec;
    rec["id"] = item.id;
    rec["text"] = item.text;
    rec["label"] = to_int(item.label);
    out << rec.dump() << '\n';
  }
}

namespace {

// Indices of the dataset grouped by label, in source order.
std::array<std::vector<std::size_t>, 2> indices_by_class(const Dataset& d) {
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < d.items.size(); ++i) {
    by_class[static_cast<std::size_t>(to_int(d.items[i].label))].push_back(i);
  }
  return by_class;
}

// Allocate round(fraction * total) slots across classes by largest remainder;
// keeps every class within one item of its exact share.
std::array<std::size_t, 2> allocate_counts(const std::array<std::vector<std::size_t>, 2>& by_class,
                                           double fraction) {
  const double total = static_cast<double>(by_class[0].size() + by_class[1].size());
  std::size_t target = static_cast<std::size_t>(std::llround(fraction * total));
  std::array<std::size_t, 2> counts{};
  std::array<double, 2> remainders{};
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    const double exact = fraction * static_cast<double>(by_class[c].size());
    counts[c] = static_cast<std::size_t>(std::floor(exact));
    remainders[c] = exact - std::floor(exact);
    assigned += counts[c];
  }
  while (assigned < target) {
    const std::size_t c = remainders[0] >= remainders[1] ? 0 : 1;
    if (counts[c] < by_class[c].size()) {
      ++counts[c];
      remainders[c] = -1.0;
    } else {
      ++counts[1 - c];
    }
    ++assigned;
  }
  return counts;
}

Dataset gather(const Dataset& d, std::vector<std::size_t> indices, const std::string& name) {
  std::sort(indices.begin(), indices.end());
  Dataset out;
  out.name = name;
  out.items.reserve(indices.size());
  for (std::size_t i : indices) out.items.push_back(d.items[i]);
  return out;
}

}  // namespace

std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("split_dataset: train_fraction must be in (0,1)");
  }
  auto by_class = indices_by_class(d);
  for (std::size_t c = 0; c < 2; ++c) {
    if (by_class[c].size() < 2) {
      throw std::invalid_argument("split_dataset: class " + std::to_string(c) +
                                  " has fewer than 2 items");
    }
  }
  const auto counts = allocate_counts(by_class, train_fraction);

  Rng rng(derive_seed(seed, "split"));
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;
  for (std::size_t c = 0; c < 2; ++c) {
    rng.shuffle(by_class[c]);
    for (std::size_t i = 0; i < by_class[c].size(); ++i) {
      (i < counts[c] ? train_idx : test_idx).push_back(by_class[c][i]);
    }
  }
  return {gather(d, std::move(train_idx), d.name + "/train"),
          gather(d, std::move(test_idx), d.name + "/test")};
}

Dataset subsample(const Dataset& d, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("subsample: fraction must be in (0,1]");
  }
  if (fraction == 1.0) {
    return d;
  }
  auto by_class = indices_by_class(d);
  const auto counts = allocate_counts(by_class, fraction);
  if (counts[0] + counts[1] == 0) {
    throw std::invalid_argument("subsample: resulting size is 0");
  }

  Rng rng(derive_seed(seed, "subsample"));
  std::vector<std::size_t> picked;
  for (std::size_t c = 0; c < 2; ++c) {
    rng.shuffle(by_class[c]);
    for (std::size_t i = 0; i < counts[c]; ++i) picked.push_back(by_class[c][i]);
  }
  return gather(d, std::move(picked), d.name);
}

}  // namespace advaug
