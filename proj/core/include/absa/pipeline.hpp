#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "absa/baselines.hpp"
#include "absa/config.hpp"
#include "absa/dataset.hpp"
#include "absa/evaluation.hpp"
#include "absa/model.hpp"
#include "absa/ranking.hpp"

namespace absa {

/// Overrides the default per-run cache directory for view rankings.
inline constexpr const char* kCacheRootEnv = "ABSA_CACHE_ROOT";

// Artifact layout of one run directory.
struct RunPaths {
  std::filesystem::path root;
  std::filesystem::path cache_root;

  std::filesystem::path frozen_config() const { return root / "config.json"; }
  /// Stage 0 names the merged single-stage variant.
  std::filesystem::path pairs(int stage) const;
  std::filesystem::path checkpoint(int stage) const;
  std::filesystem::path train_report(int stage) const;
  std::filesystem::path predictions() const { return root / "predictions.jsonl"; }
  std::filesystem::path infer_report() const { return root / "infer.json"; }
  std::filesystem::path eval_json() const { return root / "eval.json"; }
  std::filesystem::path eval_table() const { return root / "eval.txt"; }
  std::filesystem::path stats_json() const { return root / "stats.json"; }
  std::filesystem::path multiseed_json() const { return root / "multiseed.json"; }
  std::filesystem::path rankings(const std::string& split_stem,
                                 const ElementSet& elements,
                                 const std::string& signature) const;
};

struct MultiseedReport {
  std::vector<std::uint64_t> seeds;
  std::vector<double> f1_scores;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
};

// Drives the end-to-end flow: rank -> build -> train 1 -> train 2 ->
// infer -> eval, plus stats, zero-shot transfer, and multi-seed runs.
// Each command is idempotent for a fixed config and seed, writes its
// artifacts under the run directory, and fails by naming the command
// that has to run first.
class Pipeline {
 public:
  explicit Pipeline(ExperimentConfig config, std::ostream* log = nullptr);

  const ExperimentConfig& config() const { return config_; }
  const RunPaths& paths() const { return paths_; }
  const PipelineVariant& variant() const { return variant_; }

  void cmd_rank();
  void cmd_build();
  void cmd_train(int stage);
  void cmd_infer();
  EvalReport cmd_eval(const std::string& slice = "", bool no_filter = false);
  std::string cmd_stats();
  EvalReport cmd_cross_eval(const std::string& train_group,
                            const std::string& test_group);
  MultiseedReport cmd_multiseed();

  /// rank, build, train (both stages unless merged), infer, eval.
  EvalReport run_all();

 private:
  DatasetSplit load_split(const std::string& path, const std::string& name,
                          bool require_gold) const;
  std::shared_ptr<SeqModelAdapter> make_backbone() const;
  std::vector<RankedViews> rank_split(const DatasetSplit& split,
                                      const ElementSet& elements,
                                      SeqModelAdapter& model) const;
  std::string ranking_signature() const;
  void freeze_config() const;
  std::uint64_t run_seed() const { return config_.seeds.front(); }
  std::ostream& log() const;

  ExperimentConfig config_;
  PipelineVariant variant_;
  RunPaths paths_;
  std::ostream* log_;
};

}  // namespace absa
