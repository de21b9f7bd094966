#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absa/dataset.hpp"
#include "absa/types.hpp"

namespace absa {

// Inverse-frequency class weights over clipped tuple counts 1..6.
// Unoccupied classes are listed, never silently weighted.
struct ClassWeights {
  static constexpr int kMaxClass = 6;
  std::map<int, double> weights;
  std::vector<int> unoccupied;

  double at(int label) const;
};

ClassWeights class_weights(const DatasetSplit& split);

/// Weighted cross-entropy of one example: -W_label * log softmax(logits)[label].
/// Logits index 0 holds class 1.
double classification_loss(std::span<const double> logits, int label,
                           const ClassWeights& weights);

/// Mean weighted cross-entropy over a batch.
double classification_loss(std::span<const std::vector<double>> logits,
                           std::span<const int> labels,
                           const ClassWeights& weights);

/// Uniform draw from {1..6} per instance, seeded and order-stable.
std::map<std::string, int> random_count_baseline(const DatasetSplit& split,
                                                 std::uint64_t seed);

/// The constant predictor 1.
std::map<std::string, int> majority_count_baseline(const DatasetSplit& split);

/// Bag-of-words softmax classifier over clipped counts, trained with the
/// weighted loss above. A desk-scale stand-in for an encoder classifier.
std::map<std::string, int> classification_count_baseline(
    const DatasetSplit& train, const DatasetSplit& eval, std::uint64_t seed,
    int epochs = 20);

// One runnable pipeline configuration; the full method plus each switch
// the ablation table flips.
struct PipelineVariant {
  std::string name = "full";
  bool filtering = true;       // stop-word filtering at evaluation
  bool two_stage = true;       // off = joint template+tuple generation
  bool entropy_ranking = true; // off = seeded random view order
  bool multi_view = true;      // off = K forced to 1, lowest-score view
  ElementSet stage1_elements = ElementSet::acs();
};

std::vector<PipelineVariant> ablation_variants();
PipelineVariant variant_by_name(const std::string& name);

}  // namespace absa
