#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>

#include "advaug/dataset.hpp"
#include "advaug/manifest.hpp"
#include "advaug/types.hpp"
#include "temp_dir.hpp"

using namespace advaug;
using advaug::testing::TempDir;

namespace {

std::string jsonl_line(const std::string& id, const std::string& text, int label) {
  std::ostringstream out;
  out << R"({"id":")" << id << R"(","text":")" << text << R"(","label":)" << label << "}\n";
  return out.str();
}

Dataset make_balanced(std::size_t n) {
  Dataset d;
  d.name = "mem";
  for (std::size_t i = 0; i < n; ++i) {
    d.items.push_back({"item-" + std::to_string(i), "text " + std::to_string(i),
                       i % 2 == 0 ? Label::kFake : Label::kReal});
  }
  return d;
}

std::set<std::string> id_set(const Dataset& d) {
  std::set<std::string> out;
  for (const auto& it : d.items) out.insert(it.id);
  return out;
}

}  // namespace

TEST_CASE("load_dataset reads jsonl in order") {
  TempDir tmp;
  const auto path = tmp.write("data.jsonl",
                              jsonl_line("a", "first article", 1) + jsonl_line("b", "second", 0) +
                                  jsonl_line("c", "third", 1));
  const Dataset d = load_dataset(path);
  REQUIRE(d.size() == 3);
  CHECK(d.items[0].id == "a");
  CHECK(d.items[2].id == "c");
  CHECK(d.count_label(Label::kFake) == 2);
  CHECK(d.count_label(Label::kReal) == 1);
}

TEST_CASE("load_dataset at benchmark scale preserves counts") {
  // mirrors the published corpus shape: 774 articles, 399 real, 375 fake
  TempDir tmp;
  std::string content;
  for (int i = 0; i < 774; ++i) {
    content += jsonl_line("n" + std::to_string(i), "article body " + std::to_string(i), i < 375 ? 1 : 0);
  }
  const Dataset d = load_dataset(tmp.write("big.jsonl", content));
  CHECK(d.size() == 774);
  CHECK(d.count_label(Label::kReal) == 399);
  CHECK(d.count_label(Label::kFake) == 375);
}

TEST_CASE("load_dataset error paths") {
  TempDir tmp;
  CHECK_THROWS_WITH_AS(load_dataset(tmp.write("empty.jsonl", "")),
                       doctest::Contains("empty dataset"), std::runtime_error);

  const auto malformed = tmp.write("bad.jsonl", jsonl_line("a", "ok", 1) + "{not json\n");
  CHECK_THROWS_WITH_AS(load_dataset(malformed), doctest::Contains(":2:"), std::runtime_error);

  const auto dup = tmp.write("dup.jsonl", jsonl_line("a", "one", 1) + jsonl_line("a", "two", 0));
  CHECK_THROWS_WITH_AS(load_dataset(dup), doctest::Contains("duplicate id"), std::runtime_error);

  const auto badlabel = tmp.write("lbl.jsonl", jsonl_line("a", "one", 3));
  CHECK_THROWS_AS(load_dataset(badlabel), std::runtime_error);

  const auto blank_text = tmp.write("blank.jsonl", jsonl_line("a", "   ", 1));
  CHECK_THROWS_WITH_AS(load_dataset(blank_text), doctest::Contains("empty text"), std::runtime_error);

  const auto missing = tmp.write("missing.jsonl", "{\"id\":\"a\",\"text\":\"x\"}\n");
  CHECK_THROWS_AS(load_dataset(missing), std::runtime_error);
}

TEST_CASE("save then load round-trips a dataset") {
  TempDir tmp;
  const Dataset d = make_balanced(17);
  save_dataset(d, tmp.file("out.jsonl"));
  const Dataset back = load_dataset(tmp.file("out.jsonl"));
  REQUIRE(back.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(back.items[i].id == d.items[i].id);
    CHECK(back.items[i].text == d.items[i].text);
    CHECK(back.items[i].label == d.items[i].label);
  }
}

TEST_CASE("split_dataset at benchmark scale") {
  Dataset d;
  for (int i = 0; i < 774; ++i) {
    d.items.push_back({"n" + std::to_string(i), "body", i < 375 ? Label::kFake : Label::kReal});
  }
  auto [train, test] = split_dataset(d, 0.8, 7);
  const bool count_ok = train.size() == 619 || train.size() == 620;
  CHECK(count_ok);
  CHECK(train.size() + test.size() == 774);

  auto [train2, test2] = split_dataset(d, 0.8, 7);
  CHECK(id_set(train) == id_set(train2));
}

TEST_CASE("split_dataset exact stratification on a balanced ten") {
  const Dataset d = make_balanced(10);
  auto [train, test] = split_dataset(d, 0.8, 123);
  CHECK(train.size() == 8);
  CHECK(test.size() == 2);
  CHECK(train.count_label(Label::kFake) == 4);
  CHECK(train.count_label(Label::kReal) == 4);
  CHECK(test.count_label(Label::kFake) == 1);
  CHECK(test.count_label(Label::kReal) == 1);
}

TEST_CASE("split_dataset rejects undersized classes and bad fractions") {
  Dataset d;
  d.items.push_back({"a", "x", Label::kFake});
  d.items.push_back({"b", "x", Label::kReal});
  d.items.push_back({"c", "x", Label::kReal});
  CHECK_THROWS_AS(split_dataset(d, 0.5, 1), std::invalid_argument);

  const Dataset ok = make_balanced(10);
  CHECK_THROWS_AS(split_dataset(ok, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(split_dataset(ok, 1.0, 1), std::invalid_argument);
}

TEST_CASE("split_dataset partition property over random fractions and seeds") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 10 + rng() % 120;
    const Dataset d = make_balanced(n);
    const double fraction = 0.1 + 0.8 * static_cast<double>(rng() % 100) / 100.0;
    auto [train, test] = split_dataset(d, fraction, rng());

    auto train_ids = id_set(train);
    auto test_ids = id_set(test);
    CHECK(train_ids.size() + test_ids.size() == n);
    std::set<std::string> joined = train_ids;
    joined.insert(test_ids.begin(), test_ids.end());
    CHECK(joined == id_set(d));

    for (Label l : {Label::kFake, Label::kReal}) {
      const double expect = fraction * static_cast<double>(d.count_label(l));
      CHECK(std::abs(static_cast<double>(train.count_label(l)) - expect) < 1.0);
    }
  }
}

TEST_CASE("subsample identity, exactness, determinism") {
  const Dataset d = make_balanced(100);
  const Dataset all = subsample(d, 1.0, 9);
  REQUIRE(all.size() == 100);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(all.items[i].id == d.items[i].id);

  const Dataset tenth = subsample(d, 0.1, 42);
  CHECK(tenth.size() == 10);
  CHECK(tenth.count_label(Label::kFake) == 5);
  CHECK(tenth.count_label(Label::kReal) == 5);

  const Dataset again = subsample(d, 0.1, 42);
  CHECK(id_set(tenth) == id_set(again));

  CHECK_THROWS_AS(subsample(d, 0.0, 1), std::invalid_argument);
  Dataset four = make_balanced(4);
  CHECK_THROWS_AS(subsample(four, 0.05, 1), std::invalid_argument);
}

TEST_CASE("subsample containment and per-class deviation under one item") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 40; ++trial) {
    Dataset d;
    const std::size_t fake_n = 3 + rng() % 60;
    const std::size_t real_n = 3 + rng() % 60;
    for (std::size_t i = 0; i < fake_n; ++i) d.items.push_back({"f" + std::to_string(i), "x", Label::kFake});
    for (std::size_t i = 0; i < real_n; ++i) d.items.push_back({"r" + std::to_string(i), "x", Label::kReal});
    const double fraction = 0.15 + 0.85 * static_cast<double>(rng() % 100) / 100.0;

    const Dataset sub = subsample(d, fraction, rng());
    const auto parent_ids = id_set(d);
    for (const auto& it : sub.items) CHECK(parent_ids.count(it.id) == 1);
    CHECK(std::abs(static_cast<double>(sub.count_label(Label::kFake)) -
                   fraction * static_cast<double>(fake_n)) < 1.0);
    CHECK(std::abs(static_cast<double>(sub.count_label(Label::kReal)) -
                   fraction * static_cast<double>(real_n)) < 1.0);
  }
}

namespace {

RunManifest sample_manifest() {
  RunManifest m;
  m.config = {{"rounds", "2"}, {"gateway", "simulated"}};
  m.base_seed = 99;
  m.created_at = "2024-06-01T00:00:00Z";
  m.finished_at = "2024-06-01T00:05:00Z";
  m.warnings = {"round 1: something minor"};

  RoundRecord r0;
  r0.round = 0;
  r0.candidates.push_back({"Rewrite it plainly", "generated", 0.7, 0.2, 0.64, 0.85, true, false});
  r0.candidates.push_back({"Rewrite it loudly", "generated", 0.95, 0.45, 0.19, 0.4, false, false});
  r0.selected = {"Rewrite it plainly"};
  r0.clean_auc = 0.91;

  RoundRecord r1;
  r1.round = 1;
  r1.candidates.push_back({"Rewrite it upside down", "generated", 0.15, 0.35, 0.37, 0.55, true, true});
  r1.selected = {"Rewrite it upside down"};
  r1.clean_auc = 0.93;
  r1.mean_attack_auc = 0.81;
  r1.attack_auc = {{"CNN", 0.8}, {"The Sun", 0.82}};

  m.rounds = {r0, r1};
  m.trajectory = {{"Rewrite it loudly", 0.45, 0}, {"Rewrite it plainly", 0.2, 0}};
  return m;
}

RunManifest random_manifest(std::mt19937_64& rng) {
  RunManifest m;
  m.base_seed = rng();
  m.created_at = "2024-01-01T00:00:00Z";
  m.finished_at = "2024-01-01T01:00:00Z";
  m.config["seed"] = std::to_string(rng() % 1000);
  const int rounds = static_cast<int>(rng() % 4);
  for (int r = 0; r < rounds; ++r) {
    RoundRecord rec;
    rec.round = r;
    const std::size_t cands = 1 + rng() % 4;
    for (std::size_t c = 0; c < cands; ++c) {
      CandidateRecord cand;
      cand.instruction = "instr-" + std::to_string(r) + "-" + std::to_string(c);
      cand.origin = c == 0 ? "seed" : "generated";
      cand.auc = static_cast<double>(rng() % 1000) / 1000.0;
      cand.confusion = std::abs(0.5 - cand.auc);
      cand.adversarialness = 1.0 - 1.8 * cand.confusion;
      cand.coherency = 0.1 + 0.9 * static_cast<double>(rng() % 100) / 100.0;
      cand.selected = c == 0;
      cand.flip_warning = rng() % 8 == 0;
      rec.candidates.push_back(cand);
      if (cand.selected) rec.selected.push_back(cand.instruction);
      m.trajectory.push_back({cand.instruction, cand.confusion, r});
    }
    rec.clean_auc = static_cast<double>(rng() % 1000) / 1000.0;
    if (rng() % 2 == 0) rec.mean_attack_auc = static_cast<double>(rng() % 1000) / 1000.0;
    m.rounds.push_back(rec);
  }
  std::sort(m.trajectory.begin(), m.trajectory.end(),
            [](const TrajectoryRecord& a, const TrajectoryRecord& b) { return a.score > b.score; });
  return m;
}

}  // namespace

TEST_CASE("manifest round-trip is the identity") {
  TempDir tmp;
  const RunManifest m = sample_manifest();
  save_manifest(m, tmp.file("m.json"));
  const RunManifest back = load_manifest(tmp.file("m.json"));
  CHECK(back == m);
}

TEST_CASE("manifest round-trip on generated manifests") {
  TempDir tmp;
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 25; ++trial) {
    const RunManifest m = random_manifest(rng);
    save_manifest(m, tmp.file("m.json"));
    CHECK(load_manifest(tmp.file("m.json")) == m);
  }
}

TEST_CASE("manifest load failures") {
  TempDir tmp;
  CHECK_THROWS_AS(load_manifest(tmp.file("nope.json")), std::runtime_error);

  tmp.write("trunc.json", "{\"schema_version\": 1, \"config\": {");
  CHECK_THROWS_WITH_AS(load_manifest(tmp.file("trunc.json")), doctest::Contains("parse error"),
                       std::runtime_error);

  tmp.write("vers.json", R"({"schema_version": 99})");
  CHECK_THROWS_WITH_AS(load_manifest(tmp.file("vers.json")),
                       doctest::Contains("expected 1, found 99"), std::runtime_error);
}

TEST_CASE("manifest validation rejects inconsistent records") {
  RunManifest m = sample_manifest();
  m.rounds[1].round = 0;  // not strictly increasing
  CHECK_THROWS_AS(m.validate(), std::runtime_error);

  RunManifest m2 = sample_manifest();
  m2.rounds[0].selected = {"never evaluated"};
  CHECK_THROWS_AS(m2.validate(), std::runtime_error);
}

TEST_CASE("timestamps honor SOURCE_DATE_EPOCH") {
  setenv("SOURCE_DATE_EPOCH", "0", 1);
  CHECK(current_timestamp() == "1970-01-01T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
}
