#include <doctest.h>

#include "advaug/config.hpp"
#include "temp_dir.hpp"

using namespace advaug;
using advaug::testing::TempDir;

TEST_CASE("config file parsing: comments, quotes, whitespace") {
  TempDir tmp;
  const auto path = tmp.write("run.conf",
                              "# training setup\n"
                              "dataset_path = \"data/news.jsonl\"\n"
                              "rounds = 4   # short run\n"
                              "learning_rate = 0.002\n"
                              "\n"
                              "gateway = simulated\n"
                              "eval_attacks_each_round = true\n");
  const RunConfig cfg = run_config_from_map(parse_config_file(path));
  CHECK(cfg.dataset_path == "data/news.jsonl");
  CHECK(cfg.rounds == 4);
  CHECK(cfg.learning_rate == doctest::Approx(0.002));
  CHECK(cfg.gateway == "simulated");
  CHECK(cfg.eval_attacks_each_round);
  // untouched defaults: the reference settings
  CHECK(cfg.candidates_per_round == 30);
  CHECK(cfg.select_count == 3);
  CHECK(cfg.probe_subset_size == 30);
  CHECK(cfg.epochs_per_round == 1);
}

TEST_CASE("config file parsing rejects malformed input") {
  TempDir tmp;
  CHECK_THROWS_AS(parse_config_file(tmp.file("missing.conf")), std::runtime_error);

  const auto noeq = tmp.write("noeq.conf", "rounds 4\n");
  CHECK_THROWS_WITH_AS(parse_config_file(noeq), doctest::Contains(":1:"), std::runtime_error);

  const auto nokey = tmp.write("nokey.conf", " = 4\n");
  CHECK_THROWS_AS(parse_config_file(nokey), std::runtime_error);
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK_THROWS_WITH_AS(run_config_from_map({{"no_such_key", "1"}}),
                       doctest::Contains("unknown key"), std::invalid_argument);
  CHECK_THROWS_AS(run_config_from_map({{"rounds", "four"}}), std::invalid_argument);
  CHECK_THROWS_AS(run_config_from_map({{"eval_attacks_each_round", "maybe"}}), std::invalid_argument);
}

TEST_CASE("config validation enforces ranges and cross-field rules") {
  RunConfig cfg;
  cfg.validate();  // defaults are valid

  RunConfig bad = cfg;
  bad.train_fraction = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.select_count = 99;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.gateway = "telepathy";
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.gateway = "replay";  // fixture_path required
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.ablation = "everything";
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.detector_featurizer = "external";  // external settings required
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("overrides layer on top of file values") {
  RunConfig cfg;
  apply_overrides(cfg, {{"rounds", "7"}, {"seed", "99"}});
  apply_overrides(cfg, {{"rounds", "2"}});
  CHECK(cfg.rounds == 2);
  CHECK(cfg.seed == 99);
}

TEST_CASE("flat map snapshot covers every configurable key") {
  RunConfig cfg;
  const auto snapshot = cfg.to_flat_map();
  // every key in the snapshot must be settable again (the resume path
  // compares these maps)
  RunConfig rebuilt;
  apply_overrides(rebuilt, snapshot);
  CHECK(rebuilt.to_flat_map() == snapshot);
}
