#include "advaug/cli.hpp"

#include <iostream>

#include <CLI11.hpp>

#include "advaug/analyze.hpp"
#include "advaug/dataset.hpp"
#include "advaug/harness.hpp"
#include "advaug/synth.hpp"

namespace advaug {

namespace {

struct CommonRunArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;  // key=value
  std::string dataset_path;
  std::string gateway;
  int rounds = -1;
  long long seed = -1;
};

void add_common_run_options(CLI::App* cmd, CommonRunArgs& args) {
  cmd->add_option("--config", args.config_path, "flat key=value config file");
  cmd->add_option("--out", args.out_dir, "output directory (manifest, detector, artifacts)");
  cmd->add_option("--dataset", args.dataset_path, "dataset JSONL path (overrides config)");
  cmd->add_option("--gateway", args.gateway, "simulated | http | replay | record");
  cmd->add_option("--rounds", args.rounds, "number of training rounds");
  cmd->add_option("--seed", args.seed, "base RNG seed");
  cmd->add_option("--set", args.overrides, "extra key=value config overrides")->take_all();
}

RunConfig build_config(const CommonRunArgs& args) {
  RunConfig cfg;
  if (!args.config_path.empty()) {
    apply_overrides(cfg, parse_config_file(args.config_path));
  }
  std::map<std::string, std::string> flags;
  if (!args.dataset_path.empty()) flags["dataset_path"] = args.dataset_path;
  if (!args.gateway.empty()) flags["gateway"] = args.gateway;
  if (args.rounds >= 0) flags["rounds"] = std::to_string(args.rounds);
  if (args.seed >= 0) flags["seed"] = std::to_string(args.seed);
  apply_overrides(cfg, flags);
  std::map<std::string, std::string> extra;
  for (const auto& kv : args.overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    }
    extra[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  apply_overrides(cfg, extra);
  cfg.validate();
  return cfg;
}

void print_run_summary(const RunOutputs& run, const std::string& out_dir) {
  const auto& rounds = run.manifest.rounds;
  std::cout << "rounds completed: " << rounds.size() << "\n";
  if (!rounds.empty()) {
    std::cout << "final clean AUC: " << rounds.back().clean_auc << "\n";
    if (rounds.back().mean_attack_auc) {
      std::cout << "final mean attack AUC: " << *rounds.back().mean_attack_auc << "\n";
    }
  }
  if (!out_dir.empty()) {
    std::cout << "manifest: " << out_dir << "/manifest.json\n"
              << "detector: " << out_dir << "/detector.json\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"adversarial style augmentation for robust fake-news detection"};
  app.require_subcommand(1);

  // train ------------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "run the adversarial augmentation training loop");
  CommonRunArgs train_args;
  std::string resume_dir;
  add_common_run_options(train_cmd, train_args);
  train_cmd->add_option("--resume", resume_dir, "resume from a checkpoint directory");

  // baseline -----------------------------------------------------------------
  auto* baseline_cmd = app.add_subcommand("baseline", "train a comparison baseline");
  CommonRunArgs baseline_args;
  std::string baseline_kind = "vanilla";
  baseline_cmd->add_option("--kind", baseline_kind, "vanilla | predefined_styles")->required();
  add_common_run_options(baseline_cmd, baseline_args);

  // ablate -------------------------------------------------------------------
  auto* ablate_cmd = app.add_subcommand("ablate", "run with one mechanism toggled");
  CommonRunArgs ablate_args;
  std::string ablation_name;
  ablate_cmd
      ->add_option("--name", ablation_name,
                   "random_selection | class_prompt | adversarial_only | no_adversarialness | "
                   "no_coherency | no_trajectory")
      ->required();
  add_common_run_options(ablate_cmd, ablate_args);

  // attack -------------------------------------------------------------------
  auto* attack_cmd = app.add_subcommand("attack", "evaluate a detector under style-conversion attacks");
  std::string attack_detector;
  std::string attack_dataset;
  std::string attack_suite = "publishers";
  std::string attack_gateway = "simulated";
  std::string attack_fixture;
  std::string attack_cache;
  std::string attack_out = "report.csv";
  std::string attack_model_name = "model";
  double attack_fraction = 1.0;
  unsigned long long attack_gateway_seed = 0;
  attack_cmd->add_option("--detector", attack_detector, "detector JSON file")->required();
  attack_cmd->add_option("--dataset", attack_dataset, "evaluation set JSONL (e.g. out/test_set.jsonl)")
      ->required();
  attack_cmd->add_option("--attacks", attack_suite,
                         "publishers | all | comma list (identity, CNN, summarization, ...)");
  attack_cmd->add_option("--gateway", attack_gateway, "simulated | http | replay | record");
  attack_cmd->add_option("--fixture", attack_fixture, "fixture path for replay/record gateways");
  attack_cmd->add_option("--cache", attack_cache, "conversion cache file (reused across evaluations)");
  attack_cmd->add_option("--out", attack_out, "report CSV path");
  attack_cmd->add_option("--model-name", attack_model_name, "model column value in the report");
  attack_cmd->add_option("--fraction", attack_fraction, "fraction column value in the report");
  attack_cmd->add_option("--gateway-seed", attack_gateway_seed, "simulated gateway seed");

  // analyze ------------------------------------------------------------------
  auto* analyze_cmd = app.add_subcommand("analyze", "derive plot-ready analytics from a run directory");
  std::string analyze_run_dir;
  std::string analyze_out_dir;
  analyze_cmd->add_option("--run", analyze_run_dir, "run directory holding manifest.json")->required();
  analyze_cmd->add_option("--out", analyze_out_dir, "analysis output directory (default <run>/analysis)");

  // synth-data ---------------------------------------------------------------
  auto* synth_cmd = app.add_subcommand("synth-data", "emit the synthetic style-separable benchmark");
  SynthConfig synth_cfg;
  std::string synth_out;
  synth_cmd->add_option("--items", synth_cfg.items, "number of articles");
  synth_cmd->add_option("--seed", synth_cfg.seed, "generator seed");
  synth_cmd->add_option("--style-correlation", synth_cfg.style_correlation,
                        "probability that tone markers agree with the label");
  synth_cmd->add_option("--content-separability", synth_cfg.content_separability,
                        "probability that content tokens are label-specific");
  synth_cmd->add_option("--out", synth_out, "output JSONL path")->required();

  std::vector<std::string> argv_storage;
  argv_storage.push_back("advaug");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  argv.reserve(argv_storage.size());
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (train_cmd->parsed()) {
      const RunConfig cfg = build_config(train_args);
      const RunOutputs run = run_training_from_path(cfg, train_args.out_dir, resume_dir);
      print_run_summary(run, train_args.out_dir);
    } else if (baseline_cmd->parsed()) {
      const RunConfig cfg = build_config(baseline_args);
      if (cfg.dataset_path.empty()) throw std::invalid_argument("baseline: dataset_path required");
      const RunOutputs run =
          run_baseline(baseline_kind, cfg, load_dataset(cfg.dataset_path), baseline_args.out_dir);
      print_run_summary(run, baseline_args.out_dir);
    } else if (ablate_cmd->parsed()) {
      const RunConfig cfg = build_config(ablate_args);
      if (cfg.dataset_path.empty()) throw std::invalid_argument("ablate: dataset_path required");
      const RunOutputs run =
          run_ablation(ablation_name, cfg, load_dataset(cfg.dataset_path), ablate_args.out_dir);
      print_run_summary(run, ablate_args.out_dir);
    } else if (attack_cmd->parsed()) {
      const Detector detector = Detector::load(attack_detector);
      const Dataset eval_set = load_dataset(attack_dataset);
      RunConfig gw_cfg;
      gw_cfg.gateway = attack_gateway;
      gw_cfg.fixture_path = attack_fixture;
      gw_cfg.gateway_seed = attack_gateway_seed;
      const auto gateway = make_gateway(gw_cfg);
      ConversionCache cache;
      if (!attack_cache.empty()) cache = ConversionCache(attack_cache);
      AttackEvalOptions opts;
      opts.model_name = attack_model_name;
      opts.fraction = attack_fraction;
      opts.cache = &cache;
      std::vector<std::string> warnings;
      opts.warnings = &warnings;
      const ReportTable table =
          run_attack_eval(detector, eval_set, attack_suite_from_name(attack_suite), *gateway, opts);
      table.save_csv(attack_out);
      std::cout << table.to_csv();
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "report: " << attack_out << "\n";
    } else if (analyze_cmd->parsed()) {
      const std::string out_dir =
          analyze_out_dir.empty() ? analyze_run_dir + "/analysis" : analyze_out_dir;
      const AnalyzeResult res = analyze_run(analyze_run_dir, out_dir);
      std::cout << "analysis: " << out_dir << (res.complete() ? " (complete)" : " (partial)") << "\n";
      for (const auto& o : res.omissions) std::cerr << "omitted: " << o << "\n";
    } else if (synth_cmd->parsed()) {
      const Dataset d = generate_synthetic_benchmark(synth_cfg);
      save_dataset(d, synth_out);
      std::cout << "wrote " << d.size() << " items (" << d.count_label(Label::kFake) << " fake, "
                << d.count_label(Label::kReal) << " real) to " << synth_out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace advaug
