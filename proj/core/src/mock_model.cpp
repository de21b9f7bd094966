#include "absa/mock_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace absa {

namespace {

constexpr int kEosId = 0;
constexpr int kUnkId = 1;

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) words.push_back(word);
  return words;
}

std::uint64_t fnv64(std::string_view bytes, std::uint64_t hash) {
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

const char* mode_name(MockMode mode) {
  switch (mode) {
    case MockMode::lookup: return "lookup";
    case MockMode::scripted: return "scripted";
    case MockMode::uniform: return "uniform";
    case MockMode::adversarial: return "adversarial";
  }
  return "uniform";
}

MockMode mode_from_name(const std::string& name) {
  if (name == "lookup") return MockMode::lookup;
  if (name == "scripted") return MockMode::scripted;
  if (name == "adversarial") return MockMode::adversarial;
  if (name == "uniform") return MockMode::uniform;
  throw std::runtime_error("unknown mock mode \"" + name + "\"");
}

}  // namespace

MockSeqModel::MockSeqModel(Behavior behavior)
    : behavior_(std::move(behavior)) {
  vocab_ = {"</s>", "<unk>"};
  std::set<std::string> rest;
  for (const auto kind :
       {MarkerKind::aspect, MarkerKind::category, MarkerKind::opinion,
        MarkerKind::sentiment, MarkerKind::separator}) {
    rest.insert(std::string(marker_surface(kind)));
  }
  rest.insert(std::string(kNullLiteral));
  for (const auto& word : behavior_.extra_vocab) rest.insert(word);
  for (const auto& [input, target] : behavior_.pairs) {
    for (const auto& word : split_ws(input)) rest.insert(word);
    for (const auto& word : split_ws(target)) rest.insert(word);
  }
  rest.erase("</s>");
  rest.erase("<unk>");
  for (auto& word : rest) vocab_.push_back(word);

  for (const auto& [input, target] : behavior_.pairs) {
    lookup_.emplace_back(input, tokenize(target));
  }
  tag_ = content_tag(weights_blob());
}

std::shared_ptr<MockSeqModel> MockSeqModel::make(Behavior behavior) {
  return std::shared_ptr<MockSeqModel>(new MockSeqModel(std::move(behavior)));
}

std::shared_ptr<MockSeqModel> MockSeqModel::lookup_model(
    std::vector<std::pair<std::string, std::string>> pairs, std::string name) {
  Behavior behavior;
  behavior.mode = MockMode::lookup;
  behavior.name = std::move(name);
  behavior.pairs = std::move(pairs);
  return make(std::move(behavior));
}

std::shared_ptr<MockSeqModel> MockSeqModel::scripted_model(
    std::vector<std::string> vocab, std::vector<std::vector<double>> script,
    std::string name) {
  Behavior behavior;
  behavior.mode = MockMode::scripted;
  behavior.name = std::move(name);
  behavior.extra_vocab = std::move(vocab);
  behavior.script = std::move(script);
  return make(std::move(behavior));
}

std::shared_ptr<MockSeqModel> MockSeqModel::uniform_model(
    std::vector<std::string> vocab, std::string name) {
  Behavior behavior;
  behavior.mode = MockMode::uniform;
  behavior.name = std::move(name);
  behavior.extra_vocab = std::move(vocab);
  return make(std::move(behavior));
}

std::shared_ptr<MockSeqModel> MockSeqModel::adversarial_model(
    std::vector<std::string> vocab, std::uint64_t seed, double marker_bias,
    std::string name) {
  Behavior behavior;
  behavior.mode = MockMode::adversarial;
  behavior.name = std::move(name);
  behavior.extra_vocab = std::move(vocab);
  behavior.seed = seed;
  behavior.marker_bias = marker_bias;
  return make(std::move(behavior));
}

Capabilities MockSeqModel::capabilities() const {
  return Capabilities{.stepwise_scoring = true,
                      .constrained_generation = true,
                      .fine_tuning = true,
                      .encoder_classifier = false};
}

ModelIdentity MockSeqModel::identity() const {
  return ModelIdentity{behavior_.name, tag_};
}

std::vector<int> MockSeqModel::tokenize(std::string_view text) const {
  std::vector<int> ids;
  for (const auto& word : split_ws(text)) {
    const auto it = std::find(vocab_.begin(), vocab_.end(), word);
    ids.push_back(it == vocab_.end()
                      ? kUnkId
                      : static_cast<int>(it - vocab_.begin()));
  }
  return ids;
}

std::string MockSeqModel::detokenize(std::span<const int> ids) const {
  std::string text;
  for (const int id : ids) {
    if (id == kEosId) continue;
    if (id < 0 || id >= static_cast<int>(vocab_.size())) {
      throw std::out_of_range("detokenize: id " + std::to_string(id) +
                              " outside vocabulary");
    }
    if (!text.empty()) text += ' ';
    text += vocab_[id];
  }
  return text;
}

const std::vector<int>* MockSeqModel::stored_target(
    const std::string& input_text) const {
  const std::vector<int>* found = nullptr;
  for (const auto& [input, ids] : lookup_) {
    if (input == input_text) found = &ids;  // later pairs override earlier
  }
  return found;
}

std::vector<double> MockSeqModel::step_distribution(
    const std::string& input_text, std::span<const int> prefix) const {
  const std::size_t v = vocab_.size();
  const std::size_t t = prefix.size();

  if (behavior_.mode == MockMode::scripted) {
    if (t < behavior_.script.size()) {
      auto dist = behavior_.script[t];
      dist.resize(v, 0.0);
      return dist;
    }
    std::vector<double> dist(v, 0.0);
    dist[kEosId] = 1.0;
    return dist;
  }

  if (behavior_.mode == MockMode::lookup) {
    if (const auto* target = stored_target(input_text)) {
      std::vector<double> dist(v, 0.0);
      dist[t < target->size() ? (*target)[t] : kEosId] = 1.0;
      return dist;
    }
  }

  if (behavior_.mode == MockMode::adversarial) {
    // Stream keyed by (seed, input, prefix) so results are call-order
    // independent.
    std::uint64_t h = fnv64(input_text, 14695981039346656037ull ^ behavior_.seed);
    for (const int id : prefix) {
      h ^= static_cast<std::uint64_t>(id) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    std::vector<double> dist(v);
    double total = 0.0;
    for (std::size_t id = 0; id < v; ++id) {
      h ^= id;
      h *= 1099511628211ull;
      double w = static_cast<double>(h >> 11) / 9007199254740992.0;  // [0,1)
      w += 1e-6;
      if (is_marker_surface(vocab_[id])) w += behavior_.marker_bias;
      dist[id] = w;
      total += w;
    }
    for (auto& w : dist) w /= total;
    return dist;
  }

  return std::vector<double>(v, 1.0 / static_cast<double>(v));
}

std::vector<StepRecord> MockSeqModel::score_steps(
    const std::string& input_text, const std::string& target_text) {
  const auto target_ids = tokenize(target_text);
  const auto target_words = split_ws(target_text);
  std::vector<StepRecord> records;
  records.reserve(target_ids.size());
  std::vector<int> prefix;
  for (std::size_t t = 0; t < target_ids.size(); ++t) {
    StepRecord record;
    record.distribution = step_distribution(input_text, prefix);
    record.target_index = target_words[t] == "<unk>" || target_ids[t] != kUnkId
                              ? target_ids[t]
                              : -1;
    records.push_back(std::move(record));
    prefix.push_back(target_ids[t]);
  }
  return records;
}

std::vector<double> MockSeqModel::next_distribution(
    const std::string& input_text, std::span<const int> prefix) {
  return step_distribution(input_text, prefix);
}

std::shared_ptr<SeqModelAdapter> MockSeqModel::fine_tune_clone(
    std::span<const TrainPair> pairs, const TrainConfig& config,
    FineTuneReport* report) {
  // Initial loss = summed token cross-entropy of the pairs under the
  // base weights, before any update.
  double loss = 0.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto records = score_steps(pairs[p].input_text, pairs[p].target_text);
    for (std::size_t t = 0; t < records.size(); ++t) {
      const auto& record = records[t];
      const double prob = record.target_index < 0
                              ? 0.0
                              : record.distribution[record.target_index];
      const double term = -std::log(prob);
      if (!std::isfinite(term)) {
        throw std::runtime_error(
            "training diverged: non-finite loss at epoch 1, pair " +
            std::to_string(p) + ", step " + std::to_string(t) + " (input \"" +
            pairs[p].input_text + "\")");
      }
      loss += term;
    }
  }

  Behavior tuned;
  tuned.mode = MockMode::lookup;
  tuned.name = behavior_.name;
  tuned.extra_vocab = vocab_;  // vocabulary is fixed across stages
  tuned.seed = config.seed;
  tuned.parent_tag = tag_;
  for (const auto& pair : pairs) {
    tuned.pairs.emplace_back(pair.input_text, pair.target_text);
  }
  auto clone = make(std::move(tuned));
  if (report) {
    report->initial_loss = loss;
    report->epochs_run = config.epochs;
    report->checkpoint_tag = clone->identity().checkpoint_tag;
  }
  return clone;
}

std::string MockSeqModel::weights_blob() const {
  nlohmann::ordered_json blob;
  blob["mode"] = mode_name(behavior_.mode);
  blob["name"] = behavior_.name;
  blob["extra_vocab"] = behavior_.extra_vocab;
  blob["pairs"] = nlohmann::ordered_json::array();
  for (const auto& [input, target] : behavior_.pairs) {
    blob["pairs"].push_back({input, target});
  }
  blob["script"] = behavior_.script;
  blob["seed"] = behavior_.seed;
  blob["marker_bias"] = behavior_.marker_bias;
  blob["parent_tag"] = behavior_.parent_tag;
  return blob.dump(2) + "\n";
}

std::shared_ptr<SeqModelAdapter> mock_from_checkpoint(
    const std::filesystem::path& dir) {
  std::ifstream in(dir / "weights.json");
  if (!in) {
    throw std::runtime_error("checkpoint " + dir.string() +
                             " has no weights.json");
  }
  const auto blob = nlohmann::json::parse(in);
  MockSeqModel::Behavior behavior;
  behavior.mode = mode_from_name(blob.at("mode").get<std::string>());
  behavior.name = blob.at("name").get<std::string>();
  behavior.extra_vocab = blob.at("extra_vocab").get<std::vector<std::string>>();
  for (const auto& pair : blob.at("pairs")) {
    behavior.pairs.emplace_back(pair.at(0).get<std::string>(),
                                pair.at(1).get<std::string>());
  }
  behavior.script = blob.at("script").get<std::vector<std::vector<double>>>();
  behavior.seed = blob.at("seed").get<std::uint64_t>();
  behavior.marker_bias = blob.at("marker_bias").get<double>();
  behavior.parent_tag = blob.at("parent_tag").get<std::string>();
  return MockSeqModel::make(std::move(behavior));
}

}  // namespace absa
