#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "absa/config.hpp"
#include "absa/pipeline.hpp"

namespace {

struct GlobalOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir;
  bool strict_parse = false;
};

absa::ExperimentConfig resolve_config(const GlobalOptions& options) {
  auto config = absa::ExperimentConfig::load(options.config_path);
  if (options.seed_given) {
    config.seeds = {options.seed};
    config.stage1.seed = options.seed;
    config.stage2.seed = options.seed;
  }
  if (!options.out_dir.empty()) config.out_dir = options.out_dir;
  if (options.strict_parse) config.parse_mode = absa::ParseMode::strict;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Two-stage order-template pipeline for sentiment quadruple "
      "extraction"};
  app.require_subcommand(1);

  GlobalOptions options;
  app.add_option("--config", options.config_path, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* seed_option =
      app.add_option("--seed", options.seed, "override the run seed");
  app.add_option("--out", options.out_dir, "override the output directory");
  app.add_flag("--strict-parse", options.strict_parse,
               "reject malformed model output instead of repairing it");

  app.add_subcommand("rank", "score every view per instance and cache it");
  app.add_subcommand("build", "materialize stage-1/stage-2 training pairs");
  auto* train = app.add_subcommand("train", "fine-tune one stage");
  int stage = 1;
  train->add_option("--stage", stage, "training stage")
      ->required()
      ->check(CLI::Range(1, 2));
  app.add_subcommand("infer", "two-stage constrained inference over the test split");
  auto* eval = app.add_subcommand("eval", "score predictions against gold");
  std::string slice;
  bool no_filter = false;
  eval->add_option("--slice", slice, "evaluate one built-in slice only")
      ->check(CLI::IsMember({"implicit", "complex"}));
  eval->add_flag("--no-filter", no_filter, "disable stop-word filtering");
  app.add_subcommand("stats", "tuple-count distribution and count baselines");
  auto* cross = app.add_subcommand("cross-eval", "zero-shot transfer between groups");
  std::string train_group;
  std::string test_group;
  cross->add_option("--train-group", train_group, "source group name")
      ->required();
  cross->add_option("--test-group", test_group, "target group name")
      ->required();
  app.add_subcommand("multiseed", "full pipeline per seed with mean and deviation");

  CLI11_PARSE(app, argc, argv);
  options.seed_given = seed_option->count() > 0;

  try {
    absa::Pipeline pipeline(resolve_config(options), &std::cerr);
    const auto* command = app.get_subcommands().front();
    const auto& name = command->get_name();
    if (name == "rank") {
      pipeline.cmd_rank();
    } else if (name == "build") {
      pipeline.cmd_build();
    } else if (name == "train") {
      pipeline.cmd_train(stage);
    } else if (name == "infer") {
      pipeline.cmd_infer();
    } else if (name == "eval") {
      std::cout << pipeline.cmd_eval(slice, no_filter).to_table();
    } else if (name == "stats") {
      std::cout << pipeline.cmd_stats();
    } else if (name == "cross-eval") {
      std::cout << pipeline.cmd_cross_eval(train_group, test_group).to_table();
    } else if (name == "multiseed") {
      const auto report = pipeline.cmd_multiseed();
      std::cout << "f1 mean " << report.mean << " stddev " << report.stddev
                << " over " << report.seeds.size() << " seeds\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
