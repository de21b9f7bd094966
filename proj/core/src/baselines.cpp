#include "absa/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace absa {

namespace {

int clipped_count(const Instance& instance) {
  return std::min(static_cast<int>(instance.tuple_count()),
                  ClassWeights::kMaxClass);
}

std::vector<std::string> words_of(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  std::string word;
  while (in >> word) words.push_back(word);
  return words;
}

double log_softmax_at(std::span<const double> logits, int index) {
  double max_logit = logits[0];
  for (const double logit : logits) max_logit = std::max(max_logit, logit);
  double sum = 0.0;
  for (const double logit : logits) sum += std::exp(logit - max_logit);
  return logits[index] - max_logit - std::log(sum);
}

}  // namespace

double ClassWeights::at(int label) const {
  const auto it = weights.find(label);
  if (it == weights.end()) {
    throw std::out_of_range("class " + std::to_string(label) +
                            " has no weight (no training examples)");
  }
  return it->second;
}

ClassWeights class_weights(const DatasetSplit& split) {
  if (split.instances.empty()) {
    throw std::invalid_argument("class_weights: empty split");
  }
  std::map<int, long> counts;
  for (const auto& instance : split.instances) {
    ++counts[clipped_count(instance)];
  }
  ClassWeights result;
  const double total = static_cast<double>(split.instances.size());
  for (int label = 1; label <= ClassWeights::kMaxClass; ++label) {
    const auto it = counts.find(label);
    if (it == counts.end()) {
      result.unoccupied.push_back(label);
    } else {
      result.weights[label] = total / static_cast<double>(it->second);
    }
  }
  return result;
}

double classification_loss(std::span<const double> logits, int label,
                           const ClassWeights& weights) {
  if (label < 1 || label > ClassWeights::kMaxClass) {
    throw std::out_of_range("label " + std::to_string(label) +
                            " outside 1.." +
                            std::to_string(ClassWeights::kMaxClass));
  }
  if (logits.size() != static_cast<std::size_t>(ClassWeights::kMaxClass)) {
    throw std::invalid_argument("expected " +
                                std::to_string(ClassWeights::kMaxClass) +
                                " logits, got " +
                                std::to_string(logits.size()));
  }
  return -weights.at(label) * log_softmax_at(logits, label - 1);
}

double classification_loss(std::span<const std::vector<double>> logits,
                           std::span<const int> labels,
                           const ClassWeights& weights) {
  if (logits.empty() || logits.size() != labels.size()) {
    throw std::invalid_argument("batch logits/labels size mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    total += classification_loss(logits[i], labels[i], weights);
  }
  return total / static_cast<double>(logits.size());
}

std::map<std::string, int> random_count_baseline(const DatasetSplit& split,
                                                 std::uint64_t seed) {
  // Draws come straight off the engine so results match across
  // standard libraries.
  std::mt19937_64 rng(seed);
  std::map<std::string, int> counts;
  for (const auto& instance : split.instances) {
    counts[instance.id] = 1 + static_cast<int>(rng() % 6);
  }
  return counts;
}

std::map<std::string, int> majority_count_baseline(const DatasetSplit& split) {
  std::map<std::string, int> counts;
  for (const auto& instance : split.instances) {
    counts[instance.id] = 1;
  }
  return counts;
}

std::map<std::string, int> classification_count_baseline(
    const DatasetSplit& train, const DatasetSplit& eval, std::uint64_t seed,
    int epochs) {
  if (train.instances.empty()) {
    throw std::invalid_argument("classification baseline: empty train split");
  }
  const auto weights = class_weights(train);

  std::unordered_map<std::string, int> feature_ids;
  for (const auto& instance : train.instances) {
    for (const auto& word : words_of(instance.sentence)) {
      feature_ids.try_emplace(word, static_cast<int>(feature_ids.size()));
    }
  }
  const int n_features = static_cast<int>(feature_ids.size()) + 1;  // + bias
  std::vector<std::vector<double>> theta(
      ClassWeights::kMaxClass, std::vector<double>(n_features, 0.0));

  const auto featurize = [&](const std::string& sentence) {
    std::vector<int> active{n_features - 1};
    for (const auto& word : words_of(sentence)) {
      const auto it = feature_ids.find(word);
      if (it != feature_ids.end()) active.push_back(it->second);
    }
    return active;
  };
  const auto logits_of = [&](const std::vector<int>& active) {
    std::vector<double> logits(ClassWeights::kMaxClass, 0.0);
    for (int c = 0; c < ClassWeights::kMaxClass; ++c) {
      for (const int f : active) logits[c] += theta[c][f];
    }
    return logits;
  };

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(train.instances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const double lr = 0.1;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (const auto i : order) {
      const auto& instance = train.instances[i];
      const int label = clipped_count(instance);
      const auto active = featurize(instance.sentence);
      const auto logits = logits_of(active);
      // Gradient of the weighted cross-entropy: W_y * (softmax - onehot).
      double max_logit = *std::max_element(logits.begin(), logits.end());
      double sum = 0.0;
      for (const double logit : logits) sum += std::exp(logit - max_logit);
      for (int c = 0; c < ClassWeights::kMaxClass; ++c) {
        const double p = std::exp(logits[c] - max_logit) / sum;
        const double grad = weights.at(label) * (p - (c == label - 1 ? 1.0 : 0.0));
        for (const int f : active) theta[c][f] -= lr * grad;
      }
    }
  }

  std::map<std::string, int> predictions;
  for (const auto& instance : eval.instances) {
    const auto logits = logits_of(featurize(instance.sentence));
    int best = 0;
    for (int c = 1; c < ClassWeights::kMaxClass; ++c) {
      if (logits[c] > logits[best]) best = c;
    }
    predictions[instance.id] = best + 1;
  }
  return predictions;
}

std::vector<PipelineVariant> ablation_variants() {
  std::vector<PipelineVariant> variants;
  variants.push_back(PipelineVariant{});

  PipelineVariant no_filter;
  no_filter.name = "no_filter";
  no_filter.filtering = false;
  variants.push_back(no_filter);

  PipelineVariant unified;
  unified.name = "no_stage_division";
  unified.two_stage = false;
  variants.push_back(unified);

  PipelineVariant random_rank;
  random_rank.name = "no_entropy";
  random_rank.entropy_ranking = false;
  variants.push_back(random_rank);

  PipelineVariant single;
  single.name = "single_view";
  single.multi_view = false;
  variants.push_back(single);

  for (const auto kind :
       {MarkerKind::aspect, MarkerKind::category, MarkerKind::sentiment}) {
    PipelineVariant excluded;
    excluded.stage1_elements = ElementSet::acso().without(kind);
    switch (kind) {
      case MarkerKind::aspect: excluded.name = "exclude_aspect"; break;
      case MarkerKind::category: excluded.name = "exclude_category"; break;
      default: excluded.name = "exclude_sentiment"; break;
    }
    variants.push_back(excluded);
  }
  return variants;
}

PipelineVariant variant_by_name(const std::string& name) {
  for (const auto& variant : ablation_variants()) {
    if (variant.name == name) return variant;
  }
  std::string known;
  for (const auto& variant : ablation_variants()) {
    known += known.empty() ? variant.name : ", " + variant.name;
  }
  throw std::invalid_argument("unknown variant \"" + name + "\" (known: " +
                              known + ")");
}

}  // namespace absa
