#include "absa/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "absa/mock_model.hpp"

namespace absa {

TrainConfig TrainConfig::for_stage(int stage) {
  TrainConfig config;
  config.stage = stage;
  config.epochs = stage == 1 ? 30 : 40;
  return config;
}

void TrainConfig::validate() const {
  if (stage != 1 && stage != 2) {
    throw std::invalid_argument("stage must be 1 or 2");
  }
  if (learning_rate <= 0 || train_batch <= 0 || infer_batch <= 0 ||
      epochs <= 0 || max_target_tokens <= 0) {
    throw std::invalid_argument("train config fields must be positive");
  }
}

DecodeConstraint DecodeConstraint::stage1(ElementSet elements) {
  return DecodeConstraint(Kind::order_template, std::move(elements),
                          std::nullopt);
}

DecodeConstraint DecodeConstraint::stage2(OrderTemplate tmpl) {
  auto elements = tmpl.element_set();
  return DecodeConstraint(Kind::tuple_skeleton, std::move(elements),
                          std::move(tmpl));
}

DecodeConstraint DecodeConstraint::unified(ElementSet elements) {
  return DecodeConstraint(Kind::free_interleave, std::move(elements),
                          std::nullopt);
}

ConstraintCursor::ConstraintCursor(const DecodeConstraint& constraint)
    : constraint_(&constraint) {
  if (constraint.kind() == DecodeConstraint::Kind::tuple_skeleton) {
    for (const auto& view : constraint.tmpl()->views()) {
      if (!skeleton_.empty()) skeleton_.emplace_back("[SSEP]");
      for (const auto kind : view.order()) {
        skeleton_.emplace_back(marker_surface(kind));
      }
    }
  }
}

bool ConstraintCursor::allows(std::string_view token) const {
  const auto kind = marker_from_surface(token);
  switch (constraint_->kind()) {
    case DecodeConstraint::Kind::order_template: {
      if (!kind) return false;
      const std::size_t n = constraint_->elements().size();
      if (*kind == MarkerKind::separator) return used_.size() == n;
      return used_.size() < n && constraint_->elements().contains(*kind) &&
             std::find(used_.begin(), used_.end(), *kind) == used_.end();
    }
    case DecodeConstraint::Kind::tuple_skeleton: {
      if (position_ < skeleton_.size() && token == skeleton_[position_]) {
        return true;
      }
      return !kind && in_value_run_;
    }
    case DecodeConstraint::Kind::free_interleave: {
      const std::size_t n = constraint_->elements().size();
      if (!kind) return in_value_run_;
      if (*kind == MarkerKind::separator) return used_.size() == n;
      return used_.size() < n && constraint_->elements().contains(*kind) &&
             std::find(used_.begin(), used_.end(), *kind) == used_.end();
    }
  }
  return false;
}

bool ConstraintCursor::allows_eos() const {
  switch (constraint_->kind()) {
    case DecodeConstraint::Kind::order_template:
    case DecodeConstraint::Kind::free_interleave:
      return used_.size() == constraint_->elements().size();
    case DecodeConstraint::Kind::tuple_skeleton:
      return position_ == skeleton_.size();
  }
  return false;
}

void ConstraintCursor::advance(std::string_view token) {
  const auto kind = marker_from_surface(token);
  switch (constraint_->kind()) {
    case DecodeConstraint::Kind::order_template:
    case DecodeConstraint::Kind::free_interleave:
      if (!kind) return;  // value token, free-interleave only
      if (*kind == MarkerKind::separator) {
        used_.clear();
        in_value_run_ = false;
      } else {
        used_.push_back(*kind);
        in_value_run_ = true;
      }
      return;
    case DecodeConstraint::Kind::tuple_skeleton:
      if (position_ < skeleton_.size() && token == skeleton_[position_]) {
        ++position_;
        in_value_run_ = token != "[SSEP]";
      }
      return;
  }
}

int ConstraintCursor::min_tokens_to_accept() const {
  switch (constraint_->kind()) {
    case DecodeConstraint::Kind::order_template:
    case DecodeConstraint::Kind::free_interleave:
      return static_cast<int>(constraint_->elements().size() - used_.size());
    case DecodeConstraint::Kind::tuple_skeleton:
      return static_cast<int>(skeleton_.size() - position_);
  }
  return 0;
}

namespace {

// Candidate ids legal at this step. Non-EOS tokens must leave enough
// budget to finish the skeleton afterwards.
std::vector<int> allowed_ids(const ConstraintCursor& cursor,
                             const std::vector<std::string>& vocab,
                             int eos_id, int remaining_budget) {
  std::vector<int> ids;
  for (int id = 0; id < static_cast<int>(vocab.size()); ++id) {
    if (id == eos_id) {
      if (cursor.allows_eos()) ids.push_back(id);
      continue;
    }
    if (remaining_budget <= 0 || !cursor.allows(vocab[id])) continue;
    ConstraintCursor probe = cursor;
    probe.advance(vocab[id]);
    if (probe.min_tokens_to_accept() <= remaining_budget - 1) {
      ids.push_back(id);
    }
  }
  return ids;
}

double safe_log(double p) { return std::log(std::max(p, 1e-300)); }

struct Beam {
  std::vector<int> prefix;
  ConstraintCursor cursor;
  double log_prob = 0.0;
  bool done = false;
};

}  // namespace

std::string generate(SeqModelAdapter& model, const std::string& input_text,
                     const DecodeConstraint& constraint,
                     const DecodeOptions& options) {
  const auto& vocab = model.vocab();
  const int eos = model.eos_id();
  ConstraintCursor start(constraint);
  if (start.min_tokens_to_accept() > options.max_target_tokens) {
    throw std::runtime_error("token budget cannot satisfy the constraint");
  }

  if (options.beam_width <= 1) {
    std::vector<int> prefix;
    ConstraintCursor cursor = start;
    while (true) {
      const int remaining =
          options.max_target_tokens - static_cast<int>(prefix.size());
      const auto dist = model.next_distribution(input_text, prefix);
      const auto ids = allowed_ids(cursor, vocab, eos, remaining);
      if (ids.empty()) {
        throw std::runtime_error("grammar dead-end after \"" +
                                 model.detokenize(prefix) + "\"");
      }
      int best = ids.front();
      for (const int id : ids) {
        if (dist[id] > dist[best]) best = id;
      }
      if (best == eos) break;
      prefix.push_back(best);
      cursor.advance(vocab[best]);
    }
    return model.detokenize(prefix);
  }

  // Beam search; ties break on log-prob then prefix ids for determinism.
  std::vector<Beam> beams{Beam{{}, start, 0.0, false}};
  std::vector<Beam> finished;
  while (!beams.empty()) {
    std::vector<Beam> expanded;
    for (const auto& beam : beams) {
      const int remaining =
          options.max_target_tokens - static_cast<int>(beam.prefix.size());
      const auto dist = model.next_distribution(input_text, beam.prefix);
      const auto ids = allowed_ids(beam.cursor, vocab, eos, remaining);
      if (ids.empty() && finished.empty()) {
        throw std::runtime_error("grammar dead-end after \"" +
                                 model.detokenize(beam.prefix) + "\"");
      }
      for (const int id : ids) {
        Beam next = beam;
        next.log_prob += safe_log(dist[id]);
        if (id == eos) {
          next.done = true;
          finished.push_back(std::move(next));
        } else {
          next.prefix.push_back(id);
          next.cursor.advance(vocab[id]);
          expanded.push_back(std::move(next));
        }
      }
    }
    const auto better = [](const Beam& a, const Beam& b) {
      if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
      return a.prefix < b.prefix;
    };
    std::sort(expanded.begin(), expanded.end(), better);
    if (expanded.size() > static_cast<std::size_t>(options.beam_width)) {
      expanded.erase(expanded.begin() + options.beam_width, expanded.end());
    }
    // Stop once no live beam can beat the best finished one.
    if (!finished.empty()) {
      std::sort(finished.begin(), finished.end(), better);
      if (finished.size() > static_cast<std::size_t>(options.beam_width)) {
        finished.erase(finished.begin() + options.beam_width, finished.end());
      }
      if (expanded.empty() ||
          expanded.front().log_prob <= finished.front().log_prob) {
        break;
      }
    }
    beams = std::move(expanded);
  }
  if (finished.empty()) {
    throw std::runtime_error("beam search found no completed sequence");
  }
  return model.detokenize(finished.front().prefix);
}

std::shared_ptr<SeqModelAdapter> fine_tune(
    const std::shared_ptr<SeqModelAdapter>& base,
    std::span<const TrainPair> pairs, const TrainConfig& config,
    FineTuneReport* report) {
  if (!base) throw std::invalid_argument("fine_tune: null base model");
  if (pairs.empty()) throw std::invalid_argument("fine_tune: no training pairs");
  config.validate();
  if (!base->capabilities().fine_tuning) {
    throw std::runtime_error("backbone " + base->identity().backbone +
                             " does not support fine-tuning");
  }
  return base->fine_tune_clone(pairs, config, report);
}

std::vector<StepRecord> score_stepwise(SeqModelAdapter& model,
                                       const std::string& input_text,
                                       const std::string& target_text) {
  if (model.tokenize(target_text).empty()) {
    throw std::invalid_argument("score_stepwise: target tokenizes to nothing");
  }
  return model.score_steps(input_text, target_text);
}

std::string content_tag(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

void save_checkpoint(const SeqModelAdapter& model,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto identity = model.identity();

  nlohmann::ordered_json config;
  config["family"] = model.family();
  config["backbone"] = identity.backbone;
  config["tag"] = identity.checkpoint_tag;
  std::ofstream(dir / "config.json") << config.dump(2) << '\n';

  std::ofstream(dir / "weights.json") << model.weights_blob();
  std::ofstream(dir / "TAG") << identity.checkpoint_tag << '\n';
}

std::shared_ptr<SeqModelAdapter> load_checkpoint(
    const std::filesystem::path& dir) {
  std::ifstream config_in(dir / "config.json");
  if (!config_in) {
    throw std::runtime_error("no checkpoint at " + dir.string() +
                             " (missing config.json)");
  }
  const auto config = nlohmann::json::parse(config_in);
  const auto family = config.at("family").get<std::string>();
  if (family == "mock") {
    return mock_from_checkpoint(dir);
  }
  throw std::runtime_error("unknown checkpoint family \"" + family +
                           "\"; only the bundled mock family loads in-process");
}

std::string read_checkpoint_tag(const std::filesystem::path& dir) {
  std::ifstream in(dir / "TAG");
  if (!in) {
    throw std::runtime_error("no TAG file in checkpoint " + dir.string());
  }
  std::string tag;
  in >> tag;
  return tag;
}

}  // namespace absa
