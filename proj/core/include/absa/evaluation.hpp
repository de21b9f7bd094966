#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absa/dataset.hpp"
#include "absa/types.hpp"

namespace absa {

/// Newline-separated English stop-word list vendored as a resource so
/// scoring never depends on an external toolkit install.
const char* english_stopword_text();
const std::vector<std::string>& english_stopwords();

/// Case-folds all four fields. With filter_on, additionally removes
/// stop-word tokens from the aspect and opinion spans; a span that
/// filters to nothing keeps its case-folded original.
SentimentTuple normalize_tuple(const SentimentTuple& t, bool filter_on);

struct Prediction {
  std::string id;
  std::vector<SentimentTuple> tuples;
};

std::vector<Prediction> gold_predictions(const DatasetSplit& split);

void write_predictions(const std::filesystem::path& path,
                       std::span<const Prediction> predictions);
std::vector<Prediction> load_predictions(const std::filesystem::path& path);

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long tp = 0;
  long n_pred = 0;
  long n_gold = 0;
  std::map<std::string, EvalReport> slices;
  double count_rmse = -1.0;      // negative = not measured
  double count_accuracy = -1.0;  // negative = not measured
  double wall_time_seconds = -1.0;

  std::string to_json() const;
  std::string to_table() const;
};

/// Micro-F1 over exact four-field matches. Both sides are normalized
/// and deduplicated per instance; 0/0 ratios are 0.
EvalReport score_f1(std::span<const Prediction> preds,
                    std::span<const Prediction> golds, bool filter_on);

struct CountMetrics {
  double rmse = 0.0;
  double accuracy = 0.0;
};

/// RMSE and exact-match accuracy of predicted tuple counts.
CountMetrics count_metrics(const std::map<std::string, int>& pred_counts,
                           const DatasetSplit& golds);

/// Wall-clock seconds of one call; single-stream on purpose.
double timing_harness(const std::function<void()>& run);

struct SlicePredicate {
  std::string name;
  std::function<bool(const Instance&)> test;
};

/// implicit: any gold tuple with a "null" aspect or opinion.
/// complex: more than 3 gold tuples or a sentence over 22 words.
std::vector<SlicePredicate> builtin_slices();

/// Scores the whole split, then each named subset independently.
EvalReport slice_report(const DatasetSplit& split,
                        std::span<const Prediction> preds, bool filter_on,
                        std::span<const SlicePredicate> slices);

}  // namespace absa
