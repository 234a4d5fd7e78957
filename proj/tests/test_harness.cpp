#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "advaug/analyze.hpp"
#include "advaug/cli.hpp"
#include "advaug/dataset.hpp"
#include "advaug/harness.hpp"
#include "advaug/manifest.hpp"
#include "advaug/synth.hpp"
#include "temp_dir.hpp"

using namespace advaug;
using advaug::testing::TempDir;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(bool(in), ("missing file: " + path).c_str());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

RunConfig small_config() {
  RunConfig cfg;
  cfg.rounds = 3;
  cfg.candidates_per_round = 6;
  cfg.select_count = 2;
  cfg.probe_subset_size = 12;
  cfg.detector_dim = 1 << 12;
  cfg.embedder_dim = 1 << 10;
  cfg.seed = 11;
  cfg.gateway = "simulated";
  return cfg;
}

Dataset bench(std::size_t items = 100, std::uint64_t seed = 21) {
  SynthConfig sc;
  sc.items = items;
  sc.seed = seed;
  return generate_synthetic_benchmark(sc);
}

struct FixedEpoch {
  FixedEpoch() { setenv("SOURCE_DATE_EPOCH", "1717200000", 1); }
  ~FixedEpoch() { unsetenv("SOURCE_DATE_EPOCH"); }
};

}  // namespace

TEST_CASE("run_training keeps full per-round records") {
  const RunConfig cfg = small_config();
  const RunOutputs run = run_training(cfg, bench());

  REQUIRE(run.manifest.rounds.size() == 3);
  std::size_t total_selected = 0;
  for (const auto& r : run.manifest.rounds) {
    CHECK(r.candidates.size() == 6);
    CHECK(r.selected.size() == 2);
    total_selected += r.selected.size();
    for (const auto& sel : r.selected) {
      const bool found = std::any_of(r.candidates.begin(), r.candidates.end(),
                                     [&](const CandidateRecord& c) { return c.instruction == sel && c.selected; });
      CHECK(found);
    }
    for (const auto& c : r.candidates) {
      CHECK(c.confusion == doctest::Approx(std::abs(0.5 - c.auc)).epsilon(1e-12));
      CHECK(c.adversarialness == doctest::Approx(1.0 - 1.8 * c.confusion).epsilon(1e-12));
      CHECK(c.coherency >= 0.1);
      CHECK(c.coherency <= 1.0);
    }
    CHECK(r.clean_auc > 0.5);
  }
  CHECK(total_selected == cfg.select_count * 3);
  CHECK(run.manifest.trajectory.size() <= cfg.trajectory_capacity);
  CHECK(run.manifest.config.at("run_kind") == "full");
}

TEST_CASE("run_training with zero rounds is the vanilla warmup") {
  RunConfig cfg = small_config();
  cfg.rounds = 0;
  const RunOutputs run = run_training(cfg, bench());
  CHECK(run.manifest.rounds.empty());
  CHECK(run.detector.optimizer_step() > 0);

  // matches the vanilla baseline at rounds = 0 exactly
  const RunOutputs baseline = run_baseline("vanilla", cfg, bench());
  CHECK(run.detector.same_parameters(baseline.detector));
}

TEST_CASE("subsample fraction shrinks the training split, not the test set") {
  TempDir tmp;
  RunConfig cfg = small_config();
  cfg.rounds = 1;
  cfg.subsample_fraction = 0.5;
  run_training(cfg, bench(), tmp.dir());
  const Dataset train = load_dataset(tmp.file("train_originals.jsonl"));
  const Dataset test = load_dataset(tmp.file("test_set.jsonl"));
  CHECK(train.size() == 40);  // 100 items -> 80 train, halved
  CHECK(test.size() == 20);
}

TEST_CASE("identical config and seeds give byte-identical outputs") {
  FixedEpoch epoch;
  TempDir tmp1, tmp2;
  const RunConfig cfg = small_config();
  run_training(cfg, bench(), tmp1.dir());
  run_training(cfg, bench(), tmp2.dir());
  CHECK(slurp(tmp1.file("manifest.json")) == slurp(tmp2.file("manifest.json")));
  CHECK(slurp(tmp1.file("detector.json")) == slurp(tmp2.file("detector.json")));

  RunConfig other = cfg;
  other.seed = 12;
  TempDir tmp3;
  run_training(other, bench(), tmp3.dir());
  CHECK(slurp(tmp1.file("manifest.json")) != slurp(tmp3.file("manifest.json")));
}

TEST_CASE("resume from a checkpoint reproduces the uninterrupted run exactly") {
  FixedEpoch epoch;
  TempDir full_dir, resumed_dir;
  RunConfig cfg = small_config();
  cfg.rounds = 4;
  run_training(cfg, bench(), full_dir.dir());

  // produce a checkpoint that looks interrupted after round 2 of 4
  RunConfig half = cfg;
  half.rounds = 2;
  run_training(half, bench(), resumed_dir.dir());
  RunManifest snapshot = load_manifest(resumed_dir.file("manifest.json"));
  snapshot.config["rounds"] = "4";
  save_manifest(snapshot, resumed_dir.file("manifest.json"));

  run_training(cfg, bench(), resumed_dir.dir(), resumed_dir.dir());
  CHECK(slurp(resumed_dir.file("manifest.json")) == slurp(full_dir.file("manifest.json")));
  CHECK(slurp(resumed_dir.file("detector.json")) == slurp(full_dir.file("detector.json")));
}

TEST_CASE("resume refuses a mismatched configuration") {
  TempDir tmp;
  RunConfig cfg = small_config();
  cfg.rounds = 1;
  run_training(cfg, bench(), tmp.dir());
  RunConfig other = cfg;
  other.select_count = 3;
  CHECK_THROWS_WITH_AS(run_training(other, bench(), tmp.dir(), tmp.dir()),
                       doctest::Contains("does not match"), std::runtime_error);
}

TEST_CASE("identity attack equals the clean AUC exactly") {
  RunConfig cfg = small_config();
  cfg.rounds = 1;
  const RunOutputs run = run_training(cfg, bench());
  auto [unused_train, test] = split_dataset(bench(), cfg.train_fraction, cfg.seed);

  SimulatedGateway gw(0);
  const ReportTable table = run_attack_eval(run.detector, test, {identity_attack()}, gw);
  const auto* clean = table.find("clean");
  const auto* identity = table.find("identity");
  REQUIRE(clean != nullptr);
  REQUIRE(identity != nullptr);
  CHECK(*identity->auc == *clean->auc);
}

TEST_CASE("publisher restyling hurts a vanilla detector on the style benchmark") {
  RunConfig cfg = small_config();
  cfg.rounds = 3;
  const Dataset data = bench(200, 31);
  const RunOutputs vanilla = run_baseline("vanilla", cfg, data);
  auto [unused_train, test] = split_dataset(data, cfg.train_fraction, cfg.seed);

  SimulatedGateway gw(0);
  const ReportTable table = run_attack_eval(vanilla.detector, test, publisher_attacks(), gw,
                                            {.model_name = "vanilla"});
  const double clean = *table.find("clean")->auc;
  const double attacked = *table.find("attack_average")->auc;
  CHECK(clean > 0.85);  // the benchmark is cleanly learnable without attacks
  CHECK(attacked < clean);
}

TEST_CASE("attack average is the arithmetic mean of attack cells") {
  RunConfig cfg = small_config();
  cfg.rounds = 1;
  const RunOutputs run = run_training(cfg, bench());
  auto [unused_train, test] = split_dataset(bench(), cfg.train_fraction, cfg.seed);

  SimulatedGateway gw(0);
  const auto attacks = publisher_attacks();
  const ReportTable table = run_attack_eval(run.detector, test, attacks, gw);
  double sum = 0.0;
  for (const auto& a : attacks) sum += *table.find(a.name)->auc;
  CHECK(*table.find("attack_average")->auc ==
        doctest::Approx(sum / static_cast<double>(attacks.size())).epsilon(1e-13));
}

TEST_CASE("empty attack list yields a clean-only report") {
  RunConfig cfg = small_config();
  cfg.rounds = 0;
  const RunOutputs run = run_training(cfg, bench());
  auto [unused_train, test] = split_dataset(bench(), cfg.train_fraction, cfg.seed);
  SimulatedGateway gw(0);
  const ReportTable table = run_attack_eval(run.detector, test, {}, gw);
  REQUIRE(table.cells.size() == 1);
  CHECK(table.cells[0].attack == "clean");
}

TEST_CASE("excessive conversion fallbacks mark the cell failed") {
  struct EmptyGateway final : Gateway {
    std::string fingerprint() const override { return "empty:v1"; }
    std::string perform(const ChatRequest&) override { return ""; }
  } empty_gw;

  RunConfig cfg = small_config();
  cfg.rounds = 0;
  const RunOutputs run = run_training(cfg, bench());
  auto [unused_train, test] = split_dataset(bench(), cfg.train_fraction, cfg.seed);

  std::vector<std::string> warnings;
  AttackEvalOptions opts;
  opts.warnings = &warnings;
  const ReportTable table = run_attack_eval(run.detector, test, {publisher_attack("CNN")}, empty_gw, opts);
  CHECK_FALSE(table.find("CNN")->auc.has_value());
  CHECK_FALSE(table.find("attack_average")->auc.has_value());
  CHECK_FALSE(warnings.empty());

  const std::string csv = table.to_csv();
  CHECK(csv.find("CNN,1,failed") != std::string::npos);
}

TEST_CASE("all attack kinds produce usable conversions under the simulator") {
  RunConfig cfg = small_config();
  cfg.rounds = 1;
  const RunOutputs run = run_training(cfg, bench());
  auto [unused_train, test] = split_dataset(bench(), cfg.train_fraction, cfg.seed);
  SimulatedGateway gw(0);
  const ReportTable table = run_attack_eval(run.detector, test, attack_suite_from_name("all"), gw);
  for (const auto& cell : table.cells) {
    CAPTURE(cell.attack);
    CHECK(cell.auc.has_value());
  }
  // 4 publishers + 3 extra scenarios + clean + average
  CHECK(table.cells.size() == 9);
}

TEST_CASE("predefined-styles baseline reuses the four tone prompts every round") {
  RunConfig cfg = small_config();
  cfg.rounds = 2;
  const RunOutputs run = run_baseline("predefined_styles", cfg, bench());
  REQUIRE(run.manifest.rounds.size() == 2);
  std::set<std::string> first(run.manifest.rounds[0].selected.begin(),
                              run.manifest.rounds[0].selected.end());
  std::set<std::string> second(run.manifest.rounds[1].selected.begin(),
                               run.manifest.rounds[1].selected.end());
  CHECK(first == second);
  CHECK(first.size() == 4);
  CHECK(run.manifest.config.at("run_kind") == "predefined_styles");

  const RunOutputs again = run_baseline("predefined_styles", cfg, bench());
  CHECK(again.detector.same_parameters(run.detector));

  CHECK_THROWS_AS(run_baseline("nonsense", cfg, bench()), std::invalid_argument);
}

TEST_CASE("selection-only ablations reproduce the full run's candidate scores") {
  FixedEpoch epoch;
  const RunConfig cfg = small_config();
  const Dataset data = bench();
  const RunOutputs full = run_training(cfg, data);

  for (const std::string name : {"no_coherency", "no_adversarialness", "adversarial_only",
                                 "random_selection"}) {
    CAPTURE(name);
    const RunOutputs ablated = run_ablation(name, cfg, data);
    const auto& fc = full.manifest.rounds[0].candidates;
    const auto& ac = ablated.manifest.rounds[0].candidates;
    REQUIRE(fc.size() == ac.size());
    for (std::size_t i = 0; i < fc.size(); ++i) {
      CHECK(fc[i].instruction == ac[i].instruction);
      CHECK(fc[i].auc == ac[i].auc);
      CHECK(fc[i].confusion == ac[i].confusion);
      CHECK(fc[i].adversarialness == ac[i].adversarialness);
      CHECK(fc[i].coherency == ac[i].coherency);  // judged either way, scaling differs
    }
    CHECK(ablated.manifest.config.at("ablation") == name);
  }
}

TEST_CASE("adversarial-only ablation selects exactly the top-k by adversarialness") {
  const RunConfig cfg = small_config();
  const RunOutputs run = run_ablation("adversarial_only", cfg, bench());
  for (const auto& round : run.manifest.rounds) {
    auto sorted = round.candidates;
    std::sort(sorted.begin(), sorted.end(), [](const CandidateRecord& a, const CandidateRecord& b) {
      if (a.adversarialness != b.adversarialness) return a.adversarialness > b.adversarialness;
      return a.instruction < b.instruction;
    });
    std::set<std::string> expected;
    for (std::size_t i = 0; i < round.selected.size(); ++i) expected.insert(sorted[i].instruction);
    CHECK(std::set<std::string>(round.selected.begin(), round.selected.end()) == expected);
  }
}

TEST_CASE("generation-stage ablations change the request, not the bookkeeping") {
  const RunConfig cfg = small_config();
  for (const std::string name : {"class_prompt", "no_trajectory"}) {
    CAPTURE(name);
    const RunOutputs run = run_ablation(name, cfg, bench());
    CHECK(run.manifest.rounds.size() == 3);
    for (const auto& r : run.manifest.rounds) CHECK(r.candidates.size() == 6);
  }
  CHECK_THROWS_AS(run_ablation("none", small_config(), bench()), std::invalid_argument);
  CHECK_THROWS_AS(run_ablation("unknown", small_config(), bench()), std::invalid_argument);
}

TEST_CASE("conversion cache persists to disk and reloads") {
  TempDir tmp;
  const std::string path = tmp.file("cache.jsonl");
  {
    ConversionCache cache(path);
    CHECK_FALSE(cache.get("tag", "id1", "gw").has_value());
    cache.put("tag", "id1", "gw", "converted text");
    CHECK(cache.get("tag", "id1", "gw") == std::string("converted text"));
  }
  ConversionCache reloaded(path);
  CHECK(reloaded.size() == 1);
  CHECK(reloaded.get("tag", "id1", "gw") == std::string("converted text"));
  CHECK_FALSE(reloaded.get("tag", "id1", "other-gw").has_value());
}

TEST_CASE("analyze produces per-round curves and selection comparisons") {
  TempDir tmp;
  RunConfig cfg = small_config();
  cfg.rounds = 2;
  cfg.eval_attacks_each_round = true;
  run_training(cfg, bench(), tmp.dir());

  const AnalyzeResult res = analyze_run(tmp.dir(), tmp.file("analysis"));
  CHECK(res.complete());

  const std::string rounds_csv = slurp(tmp.file("analysis/rounds.csv"));
  CHECK(rounds_csv.find("round,clean_auc,mean_attack_auc") == 0);
  // header + 2 rounds
  CHECK(std::count(rounds_csv.begin(), rounds_csv.end(), '\n') == 3);

  const std::string sel_csv = slurp(tmp.file("analysis/selection.csv"));
  CHECK(std::count(sel_csv.begin(), sel_csv.end(), '\n') == 3);

  const std::string stats_csv = slurp(tmp.file("analysis/textstats.csv"));
  CHECK(stats_csv.find("-1,") != std::string::npos);  // originals row
  CHECK(slurp(tmp.file("analysis/histograms.csv")).find("perplexity") != std::string::npos);
}

TEST_CASE("analyze on identity augmentations reproduces the original statistics") {
  TempDir tmp;
  // hand-built run directory: one round whose augmented copies equal the originals
  const Dataset train = bench(30, 5);
  save_dataset(train, tmp.file("train_originals.jsonl"));

  RunManifest m;
  m.created_at = m.finished_at = "2024-01-01T00:00:00Z";
  RoundRecord r;
  r.round = 0;
  CandidateRecord c;
  c.instruction = "Repeat the following article unchanged";
  c.origin = "generated";
  c.auc = 0.5;
  c.adversarialness = 1.0;
  c.coherency = 1.0;
  c.selected = true;
  r.candidates.push_back(c);
  r.selected = {c.instruction};
  r.clean_auc = 0.5;
  m.rounds.push_back(r);
  save_manifest(m, tmp.file("manifest.json"));

  std::filesystem::create_directories(tmp.file("augmented"));
  {
    std::ofstream out(tmp.file("augmented/round_0.jsonl"));
    for (const auto& item : train.items) {
      out << nlohmann::json{{"id", item.id}, {"round", 0}, {"prompt_hash", "x"}, {"text", item.text}}.dump()
          << '\n';
    }
  }

  const AnalyzeResult res = analyze_run(tmp.dir(), tmp.file("analysis"));
  // candidates artifact is absent, so the report is partial, but text stats exist
  CHECK_FALSE(res.complete());

  const std::string stats = slurp(tmp.file("analysis/textstats.csv"));
  std::istringstream in(stats);
  std::string header, originals_row, round_row;
  std::getline(in, header);
  std::getline(in, originals_row);
  std::getline(in, round_row);
  // identical texts: identical mean TTR and perplexity columns
  CHECK(originals_row.substr(originals_row.find(',')) == round_row.substr(round_row.find(',')));
}

TEST_CASE("analyze flags missing artifacts instead of failing") {
  TempDir tmp;
  RunManifest m;
  m.created_at = m.finished_at = "2024-01-01T00:00:00Z";
  RoundRecord r;
  r.round = 0;
  r.clean_auc = 0.7;
  m.rounds.push_back(r);
  save_manifest(m, tmp.file("manifest.json"));

  const AnalyzeResult res = analyze_run(tmp.dir(), tmp.file("analysis"));
  CHECK_FALSE(res.complete());
  CHECK(slurp(tmp.file("analysis/rounds.csv")).find("0,0.7") != std::string::npos);
  CHECK(slurp(tmp.file("analysis/notes.txt")).find("train_originals") != std::string::npos);
}

TEST_CASE("cli synth-data is deterministic and cli exit codes are stable") {
  TempDir tmp;
  CHECK(run_cli({"synth-data", "--items", "60", "--seed", "1", "--out", tmp.file("a.jsonl")}) == 0);
  CHECK(run_cli({"synth-data", "--items", "60", "--seed", "1", "--out", tmp.file("b.jsonl")}) == 0);
  CHECK(slurp(tmp.file("a.jsonl")) == slurp(tmp.file("b.jsonl")));

  CHECK(run_cli({"definitely-not-a-command"}) == 1);
  CHECK(run_cli({"train", "--no-such-flag"}) == 1);
  CHECK(run_cli({"train", "--dataset", tmp.file("missing.jsonl")}) == 2);
}

TEST_CASE("cli train then attack produces the expected report shape") {
  TempDir tmp;
  const std::string data = tmp.file("bench.jsonl");
  REQUIRE(run_cli({"synth-data", "--items", "100", "--seed", "4", "--out", data}) == 0);
  REQUIRE(run_cli({"train", "--dataset", data, "--rounds", "1", "--seed", "5", "--out",
                   tmp.file("run"), "--set", "candidates_per_round=5", "--set", "select_count=2",
                   "--set", "probe_subset_size=10", "--set", "detector_dim=4096", "--set",
                   "embedder_dim=1024"}) == 0);
  REQUIRE(run_cli({"attack", "--detector", tmp.file("run/detector.json"), "--dataset",
                   tmp.file("run/test_set.jsonl"), "--attacks", "publishers", "--out",
                   tmp.file("report.csv"), "--model-name", "full"}) == 0);

  const std::string csv = slurp(tmp.file("report.csv"));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "model,attack,fraction,auc");
  std::vector<std::string> attacks;
  while (std::getline(in, line)) {
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    CHECK(line.substr(0, first) == "full");
    attacks.push_back(line.substr(first + 1, second - first - 1));
  }
  const std::vector<std::string> expected = {"clean",   "CNN",
                                             "The New York Times", "The Sun",
                                             "National Enquirer",  "attack_average"};
  CHECK(attacks == expected);

  REQUIRE(run_cli({"analyze", "--run", tmp.file("run")}) == 0);
  CHECK(std::filesystem::exists(tmp.file("run/analysis/rounds.csv")));
}

TEST_CASE("cli baseline and ablate subcommands run end to end") {
  TempDir tmp;
  const std::string data = tmp.file("bench.jsonl");
  REQUIRE(run_cli({"synth-data", "--items", "80", "--seed", "9", "--out", data}) == 0);
  const std::vector<std::string> shrink = {
      "--set", "candidates_per_round=5", "--set", "select_count=2",
      "--set", "probe_subset_size=10",   "--set", "detector_dim=4096",
      "--set", "embedder_dim=1024"};

  std::vector<std::string> baseline_args = {"baseline", "--kind",  "predefined_styles", "--dataset",
                                            data,       "--rounds", "1",                "--seed",
                                            "2",        "--out",    tmp.file("base")};
  baseline_args.insert(baseline_args.end(), shrink.begin(), shrink.end());
  REQUIRE(run_cli(baseline_args) == 0);
  CHECK(load_manifest(tmp.file("base/manifest.json")).config.at("run_kind") == "predefined_styles");

  std::vector<std::string> ablate_args = {"ablate", "--name",   "random_selection", "--dataset",
                                          data,     "--rounds", "1",                "--seed",
                                          "2",      "--out",    tmp.file("abl")};
  ablate_args.insert(ablate_args.end(), shrink.begin(), shrink.end());
  REQUIRE(run_cli(ablate_args) == 0);
  CHECK(load_manifest(tmp.file("abl/manifest.json")).config.at("ablation") == "random_selection");

  CHECK(run_cli({"baseline", "--kind", "bogus", "--dataset", data}) == 2);
}
