#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "absa/dataset.hpp"
#include "absa/model.hpp"
#include "absa/types.hpp"

namespace absa {

// Which per-view score orders the pool. Both induce a total order;
// downstream code depends only on the order, not the magnitudes.
enum class ViewScorer { step_entropy, sequence_nll };

ViewScorer view_scorer_from_name(const std::string& name);
std::string view_scorer_name(ViewScorer scorer);

struct ScoredView {
  View view;
  std::string rendered;
  double score = 0.0;
};

// Every view of one element set, scored for one instance and sorted
// ascending. Ties break on the rendered string.
struct RankedViews {
  std::string instance_id;
  ElementSet elements = ElementSet::acs();
  std::vector<ScoredView> entries;

  /// First k views; cycles through the pool when k exceeds it.
  std::vector<View> top(int k) const;
};

/// Shannon entropy of one distribution in nats; 0·ln 0 counts as 0.
double step_entropy(std::span<const double> distribution);

/// Sum of per-step distribution entropies over the forced target.
double sequence_entropy(std::span<const StepRecord> records);

/// Sum of -ln p(forced token); requires every step's target in-vocab.
double sequence_nll(std::span<const StepRecord> records);

/// Teacher-forced score of one rendered view against the sentence.
double view_entropy(SeqModelAdapter& model, const std::string& sentence,
                    const View& view,
                    ViewScorer scorer = ViewScorer::step_entropy);

RankedViews rank_views(SeqModelAdapter& model, const Instance& instance,
                       const ElementSet& elements,
                       ViewScorer scorer = ViewScorer::step_entropy);

/// Serializes rankings as JSON lines {id, element_set, entries}.
void write_rankings(const std::filesystem::path& path,
                    std::span<const RankedViews> rankings);

void cache_rankings(const DatasetSplit& split, SeqModelAdapter& model,
                    const ElementSet& elements,
                    const std::filesystem::path& path,
                    ViewScorer scorer = ViewScorer::step_entropy);

/// Restores a cache; validates pool coverage, ascending order, and the
/// element set, naming the offending record on mismatch.
std::map<std::string, RankedViews> load_rankings(
    const std::filesystem::path& path);

}  // namespace absa
