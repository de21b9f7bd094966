#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absa/types.hpp"

namespace absa {

struct Capabilities {
  bool stepwise_scoring = false;
  bool constrained_generation = false;
  bool fine_tuning = false;
  bool encoder_classifier = false;
};

struct ModelIdentity {
  std::string backbone;        // backbone family name
  std::string checkpoint_tag;  // content hash of the current weights
};

// Appendix-style training defaults; stage 1 runs 30 epochs, stage 2 runs
// 40 and is initialized from the stage-1 checkpoint.
struct TrainConfig {
  double learning_rate = 1e-4;
  int train_batch = 16;
  int infer_batch = 24;
  int epochs = 30;
  std::uint64_t seed = 42;
  std::string optimizer = "adamw";
  int stage = 1;
  int max_target_tokens = 256;

  static TrainConfig for_stage(int stage);
  void validate() const;
};

struct TrainPair {
  std::string input_text;
  std::string target_text;
};

// Teacher-forced next-token distribution at one decoding step.
// `target_index` is the forced token's vocab id, or -1 when the scoring
// vocabulary does not contain it.
struct StepRecord {
  std::vector<double> distribution;
  int target_index = -1;
};

struct FineTuneReport {
  std::optional<double> initial_loss;  // summed token cross-entropy
  int epochs_run = 0;
  std::string checkpoint_tag;
};

// Abstract sequence-to-sequence backend. Implementations must be
// deterministic under greedy decoding with a fixed seed.
class SeqModelAdapter {
 public:
  virtual ~SeqModelAdapter() = default;

  virtual Capabilities capabilities() const = 0;
  virtual ModelIdentity identity() const = 0;

  /// Adapter family key used to pick a loader for a saved checkpoint.
  virtual std::string family() const = 0;

  virtual const std::vector<std::string>& vocab() const = 0;
  virtual int eos_id() const = 0;
  virtual std::vector<int> tokenize(std::string_view text) const = 0;
  virtual std::string detokenize(std::span<const int> ids) const = 0;

  /// One record per target token, conditioning on the gold prefix.
  virtual std::vector<StepRecord> score_steps(const std::string& input_text,
                                              const std::string& target_text) = 0;

  /// Next-token distribution given the input and the generated prefix.
  virtual std::vector<double> next_distribution(
      const std::string& input_text, std::span<const int> prefix) = 0;

  virtual std::shared_ptr<SeqModelAdapter> fine_tune_clone(
      std::span<const TrainPair> pairs, const TrainConfig& config,
      FineTuneReport* report) = 0;

  /// Adapter-native weights blob, written into a checkpoint directory.
  virtual std::string weights_blob() const = 0;
};

// The output language enforced during generation. Stage 1 admits one or
// more element-set permutations joined by [SSEP]; stage 2 admits exactly
// the template's marker skeleton with free non-marker runs after each
// marker. The free-interleave form is the stage-2 language without a
// fixed template (used when the two stages are merged).
class DecodeConstraint {
 public:
  enum class Kind { order_template, tuple_skeleton, free_interleave };

  static DecodeConstraint stage1(ElementSet elements = ElementSet::acs());
  static DecodeConstraint stage2(OrderTemplate tmpl);
  static DecodeConstraint unified(ElementSet elements = ElementSet::acso());

  Kind kind() const { return kind_; }
  int stage() const { return kind_ == Kind::order_template ? 1 : 2; }
  const ElementSet& elements() const { return elements_; }
  const std::optional<OrderTemplate>& tmpl() const { return template_; }

 private:
  DecodeConstraint(Kind kind, ElementSet elements,
                   std::optional<OrderTemplate> tmpl)
      : kind_(kind), elements_(std::move(elements)),
        template_(std::move(tmpl)) {}

  Kind kind_;
  ElementSet elements_;
  std::optional<OrderTemplate> template_;
};

// Walks the constraint language token by token. Copyable so decoding can
// probe candidate continuations.
class ConstraintCursor {
 public:
  explicit ConstraintCursor(const DecodeConstraint& constraint);

  bool allows(std::string_view token) const;
  bool allows_eos() const;
  void advance(std::string_view token);

  /// Minimum further tokens before EOS becomes legal; lets generation
  /// finish the skeleton inside a length budget.
  int min_tokens_to_accept() const;

 private:
  const DecodeConstraint* constraint_;
  std::vector<std::string> skeleton_;   // tuple_skeleton: flat token list
  std::size_t position_ = 0;            // next skeleton token
  bool in_value_run_ = false;
  std::vector<MarkerKind> used_;        // markers emitted in current view
};

struct DecodeOptions {
  int beam_width = 1;  // 1 = greedy
  int max_target_tokens = 256;
};

/// Fine-tunes with token-level cross-entropy over the pairs (teacher
/// forcing). Throws on an empty pair list, a missing capability, or a
/// non-finite loss.
std::shared_ptr<SeqModelAdapter> fine_tune(
    const std::shared_ptr<SeqModelAdapter>& base,
    std::span<const TrainPair> pairs, const TrainConfig& config,
    FineTuneReport* report = nullptr);

/// Constrained generation: every step masks tokens outside the
/// constraint language, so the output always parses. Throws when the
/// grammar has no legal continuation.
std::string generate(SeqModelAdapter& model, const std::string& input_text,
                     const DecodeConstraint& constraint,
                     const DecodeOptions& options = {});

/// Teacher-forced stepwise records for ranking; rejects targets that
/// tokenize to nothing.
std::vector<StepRecord> score_stepwise(SeqModelAdapter& model,
                                       const std::string& input_text,
                                       const std::string& target_text);

// Checkpoint directory layout: config.json (family + identity record),
// weights.json (adapter blob), TAG (plain-text content hash).
void save_checkpoint(const SeqModelAdapter& model,
                     const std::filesystem::path& dir);
std::shared_ptr<SeqModelAdapter> load_checkpoint(
    const std::filesystem::path& dir);
std::string read_checkpoint_tag(const std::filesystem::path& dir);

/// FNV-1a 64-bit content hash, 16 hex chars. Stable across platforms.
std::string content_tag(std::string_view bytes);

}  // namespace absa
