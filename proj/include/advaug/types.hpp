#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace advaug {

// Binary veracity label: 1 = fake, 0 = real. The detector's score is P(fake).
enum class Label : int { kReal = 0, kFake = 1 };

inline Label label_from_int(int v) {
  if (v != 0 && v != 1) {
    throw std::invalid_argument("label must be 0 (real) or 1 (fake), got " + std::to_string(v));
  }
  return static_cast<Label>(v);
}

inline int to_int(Label l) { return static_cast<int>(l); }

// One labeled article. Text must be non-empty after whitespace trim.
struct NewsItem {
  std::string id;
  std::string text;
  Label label = Label::kReal;
};

// Ordered collection of items with unique ids.
struct Dataset {
  std::string name;
  std::vector<NewsItem> items;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }

  std::size_t count_label(Label l) const {
    std::size_t n = 0;
    for (const auto& it : items) {
      if (it.label == l) ++n;
    }
    return n;
  }

  bool has_both_classes() const {
    return count_label(Label::kFake) > 0 && count_label(Label::kReal) > 0;
  }
};

// An original subset and its converted counterpart, aligned index by index.
// Labels are carried over unchanged from the originals.
struct SubsetBatch {
  std::vector<NewsItem> original;
  std::vector<NewsItem> converted;

  std::size_t size() const { return original.size(); }

  void validate() const {
    if (original.size() != converted.size()) {
      throw std::invalid_argument("subset batch: original/converted size mismatch");
    }
    for (std::size_t i = 0; i < original.size(); ++i) {
      if (original[i].id != converted[i].id || original[i].label != converted[i].label) {
        throw std::invalid_argument("subset batch: misaligned pair at index " + std::to_string(i));
      }
    }
  }
};

}  // namespace advaug
