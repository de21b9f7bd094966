#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "absa/model.hpp"
#include "absa/ranking.hpp"
#include "absa/templating.hpp"

namespace absa {

// One experiment, declaratively. Loaded from plain JSON; every run
// freezes its resolved copy next to the artifacts it writes.
struct ExperimentConfig {
  std::string dataset_name = "dataset";
  std::string train_path;
  std::string dev_path;
  std::string test_path;
  std::string data_format = "auto";  // auto | legacy | canonical

  std::string backbone = "mock-uniform";
  TrainConfig stage1 = TrainConfig::for_stage(1);
  TrainConfig stage2 = TrainConfig::for_stage(2);

  ViewScorer scorer = ViewScorer::step_entropy;
  int beam_width = 1;
  bool filtering = true;
  ParseMode parse_mode = ParseMode::repair;
  std::string variant = "full";
  std::vector<std::uint64_t> seeds = {42};
  std::string out_dir = "runs/default";

  // Named dataset groups for zero-shot transfer runs.
  struct DatasetGroup {
    std::vector<std::string> train;
    std::vector<std::string> test;
  };
  std::map<std::string, DatasetGroup> groups;

  static ExperimentConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  void validate() const;
};

}  // namespace absa
