#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "absa/model.hpp"

namespace absa {

enum class MockMode : std::uint8_t {
  lookup,       // replay stored targets one-hot, uniform on unknown inputs
  scripted,     // fixed per-step distributions regardless of input
  uniform,      // 1/|V| everywhere
  adversarial,  // seeded random distributions, optional marker bias
};

// In-process stand-in for a seq2seq backbone. Whitespace tokenizer,
// id 0 = EOS, id 1 = UNK. All behaviors are deterministic: the
// adversarial mode derives its stream from (seed, input, prefix), so
// scores do not depend on call order.
class MockSeqModel final : public SeqModelAdapter,
                           public std::enable_shared_from_this<MockSeqModel> {
 public:
  struct Behavior {
    MockMode mode = MockMode::uniform;
    std::string name = "mock-uniform";
    std::vector<std::string> extra_vocab;  // merged with markers + pair words
    std::vector<std::pair<std::string, std::string>> pairs;  // lookup targets
    std::vector<std::vector<double>> script;  // scripted: one row per step
    std::uint64_t seed = 0;
    double marker_bias = 0.0;   // adversarial: added weight on marker tokens
    std::string parent_tag;     // checkpoint this one was tuned from
  };

  static std::shared_ptr<MockSeqModel> make(Behavior behavior);

  static std::shared_ptr<MockSeqModel> lookup_model(
      std::vector<std::pair<std::string, std::string>> pairs,
      std::string name = "mock-lookup");
  static std::shared_ptr<MockSeqModel> scripted_model(
      std::vector<std::string> vocab, std::vector<std::vector<double>> script,
      std::string name = "mock-scripted");
  static std::shared_ptr<MockSeqModel> uniform_model(
      std::vector<std::string> vocab, std::string name = "mock-uniform");
  static std::shared_ptr<MockSeqModel> adversarial_model(
      std::vector<std::string> vocab, std::uint64_t seed,
      double marker_bias = 0.0, std::string name = "mock-adversarial");

  Capabilities capabilities() const override;
  ModelIdentity identity() const override;
  std::string family() const override { return "mock"; }

  const std::vector<std::string>& vocab() const override { return vocab_; }
  int eos_id() const override { return 0; }
  std::vector<int> tokenize(std::string_view text) const override;
  std::string detokenize(std::span<const int> ids) const override;

  std::vector<StepRecord> score_steps(const std::string& input_text,
                                      const std::string& target_text) override;
  std::vector<double> next_distribution(const std::string& input_text,
                                        std::span<const int> prefix) override;

  std::shared_ptr<SeqModelAdapter> fine_tune_clone(
      std::span<const TrainPair> pairs, const TrainConfig& config,
      FineTuneReport* report) override;

  std::string weights_blob() const override;

  const Behavior& behavior() const { return behavior_; }

 private:
  explicit MockSeqModel(Behavior behavior);

  std::vector<double> step_distribution(const std::string& input_text,
                                        std::span<const int> prefix) const;
  const std::vector<int>* stored_target(const std::string& input_text) const;

  Behavior behavior_;
  std::vector<std::string> vocab_;
  std::vector<std::pair<std::string, std::vector<int>>> lookup_;  // tokenized
  std::string tag_;
};

/// Rebuilds a mock adapter from a checkpoint directory written by
/// save_checkpoint.
std::shared_ptr<SeqModelAdapter> mock_from_checkpoint(
    const std::filesystem::path& dir);

}  // namespace absa
