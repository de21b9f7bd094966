#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absa/parse_result.hpp"
#include "absa/types.hpp"

namespace absa {

// Strict mode rejects any deviation from the well-formed language.
// Repair mode recovers what it can: invalid template segments are
// dropped, tuple segments are re-read by marker identity, and every
// touched segment is flagged in the result.
enum class ParseMode { strict, repair };

// Rendered stage-1 training target: the order template alone.
struct Stage1Target {
  std::string text;
};

// Stage-2 training pair: the sentence with the template prompt appended,
// and the views interleaved with the gold tuple elements as the target.
struct Stage2Pair {
  std::string input_text;
  std::string target_text;
  std::vector<View> views;  // top-K views backing both texts, in order
};

struct TemplateParse {
  OrderTemplate result;
  std::vector<int> dropped_segments;  // repair mode only
};

struct TupleParse {
  std::vector<SentimentTuple> tuples;
  std::vector<int> repaired_segments;  // recovered by marker identity
  std::vector<int> dropped_segments;   // no usable markers, skipped
};

/// All |elements|! permutations, sorted by their rendered string.
std::vector<View> enumerate_views(const ElementSet& elements);

/// Views as space-separated markers, joined by " [SSEP] ".
std::string render_template(const OrderTemplate& tmpl);

/// Inverse of render_template over arbitrary model output. Each [SSEP]
/// segment must be a permutation of `elements`.
Parsed<TemplateParse> parse_template(std::string_view text,
                                     const ElementSet& elements,
                                     ParseMode mode = ParseMode::strict);

/// Template of the first K_i ranked views, cycling through `ranked` when
/// K_i exceeds the pool.
Stage1Target build_stage1_target(const Instance& instance,
                                 std::span<const View> ranked);

/// Prompted input and interleaved target: tuple k is written into view k,
/// each element directly after its marker.
Stage2Pair build_stage2_pair(const Instance& instance,
                             std::span<const View> ranked);

/// Reads one tuple per [SSEP] segment. In strict mode segment k's marker
/// order must equal template view k; missing element text becomes "null".
Parsed<TupleParse> parse_tuples(std::string_view text,
                                const OrderTemplate& tmpl,
                                ParseMode mode = ParseMode::strict);

/// Tuple recovery without a known template: each segment is read by
/// marker identity over `elements`. Used by the single-stage variant.
Parsed<TupleParse> parse_tuples_free(std::string_view text,
                                     const ElementSet& elements);

}  // namespace absa
