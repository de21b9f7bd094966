#include "absa/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace absa {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

const std::unordered_set<std::string>& stopword_set() {
  static const std::unordered_set<std::string> words = [] {
    std::unordered_set<std::string> set;
    for (const auto& word : english_stopwords()) set.insert(word);
    return set;
  }();
  return words;
}

std::string filter_span(const std::string& folded) {
  std::istringstream in(folded);
  std::string word;
  std::string kept;
  while (in >> word) {
    if (stopword_set().count(word)) continue;
    if (!kept.empty()) kept += ' ';
    kept += word;
  }
  // A span made only of stop words stays as-is rather than vanishing.
  return kept.empty() ? folded : kept;
}

using TupleKey = std::array<std::string, 4>;

TupleKey key_of(const SentimentTuple& t) {
  return {t.aspect, t.category, t.sentiment, t.opinion};
}

std::map<std::string, std::set<TupleKey>> normalized_sets(
    std::span<const Prediction> predictions, bool filter_on) {
  std::map<std::string, std::set<TupleKey>> sets;
  for (const auto& prediction : predictions) {
    auto [it, inserted] = sets.try_emplace(prediction.id);
    if (!inserted) {
      throw std::invalid_argument("duplicate prediction id \"" +
                                  prediction.id + "\"");
    }
    for (const auto& tuple : prediction.tuples) {
      it->second.insert(key_of(normalize_tuple(tuple, filter_on)));
    }
  }
  return sets;
}

}  // namespace

const std::vector<std::string>& english_stopwords() {
  static const std::vector<std::string> words = [] {
    std::vector<std::string> list;
    std::istringstream in(english_stopword_text());
    std::string word;
    while (std::getline(in, word)) {
      if (!word.empty() && word.back() == '\r') word.pop_back();
      if (!word.empty()) list.push_back(word);
    }
    return list;
  }();
  return words;
}

SentimentTuple normalize_tuple(const SentimentTuple& t, bool filter_on) {
  SentimentTuple out;
  out.aspect = lower(t.aspect);
  out.category = lower(t.category);
  out.sentiment = lower(t.sentiment);
  out.opinion = lower(t.opinion);
  if (filter_on) {
    if (out.aspect != kNullLiteral) out.aspect = filter_span(out.aspect);
    if (out.opinion != kNullLiteral) out.opinion = filter_span(out.opinion);
  }
  return out;
}

std::vector<Prediction> gold_predictions(const DatasetSplit& split) {
  std::vector<Prediction> golds;
  golds.reserve(split.instances.size());
  for (const auto& instance : split.instances) {
    golds.push_back(Prediction{instance.id, instance.gold});
  }
  return golds;
}

void write_predictions(const std::filesystem::path& path,
                       std::span<const Prediction> predictions) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write predictions to " + path.string());
  }
  for (const auto& prediction : predictions) {
    nlohmann::ordered_json record;
    record["id"] = prediction.id;
    record["tuples"] = nlohmann::ordered_json::array();
    for (const auto& tuple : prediction.tuples) {
      record["tuples"].push_back(
          {tuple.aspect, tuple.category, tuple.sentiment, tuple.opinion});
    }
    out << record.dump() << '\n';
  }
}

std::vector<Prediction> load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read predictions from " + path.string());
  }
  std::vector<Prediction> predictions;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      Prediction prediction;
      prediction.id = record.at("id").get<std::string>();
      for (const auto& fields : record.at("tuples")) {
        if (fields.size() != 4) {
          throw std::runtime_error("tuple arity " +
                                   std::to_string(fields.size()));
        }
        prediction.tuples.push_back(SentimentTuple{
            fields.at(0).get<std::string>(), fields.at(1).get<std::string>(),
            fields.at(2).get<std::string>(), fields.at(3).get<std::string>()});
      }
      predictions.push_back(std::move(prediction));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return predictions;
}

EvalReport score_f1(std::span<const Prediction> preds,
                    std::span<const Prediction> golds, bool filter_on) {
  const auto pred_sets = normalized_sets(preds, filter_on);
  const auto gold_sets = normalized_sets(golds, filter_on);

  std::vector<std::string> only_pred;
  std::vector<std::string> only_gold;
  for (const auto& [id, tuples] : pred_sets) {
    if (!gold_sets.count(id)) only_pred.push_back(id);
  }
  for (const auto& [id, tuples] : gold_sets) {
    if (!pred_sets.count(id)) only_gold.push_back(id);
  }
  if (!only_pred.empty() || !only_gold.empty()) {
    std::string message = "prediction/gold id mismatch;";
    for (const auto& id : only_pred) message += " +pred:" + id;
    for (const auto& id : only_gold) message += " +gold:" + id;
    throw std::invalid_argument(message);
  }

  EvalReport report;
  for (const auto& [id, pred_set] : pred_sets) {
    const auto& gold_set = gold_sets.at(id);
    report.n_pred += static_cast<long>(pred_set.size());
    report.n_gold += static_cast<long>(gold_set.size());
    for (const auto& key : pred_set) {
      if (gold_set.count(key)) ++report.tp;
    }
  }
  report.precision =
      report.n_pred == 0 ? 0.0
                         : static_cast<double>(report.tp) / report.n_pred;
  report.recall = report.n_gold == 0
                      ? 0.0
                      : static_cast<double>(report.tp) / report.n_gold;
  report.f1 = report.precision + report.recall == 0.0
                  ? 0.0
                  : 2.0 * report.precision * report.recall /
                        (report.precision + report.recall);
  return report;
}

CountMetrics count_metrics(const std::map<std::string, int>& pred_counts,
                           const DatasetSplit& golds) {
  if (golds.instances.empty()) {
    throw std::invalid_argument("count_metrics: empty split");
  }
  std::set<std::string> gold_ids;
  for (const auto& instance : golds.instances) gold_ids.insert(instance.id);
  std::string missing;
  for (const auto& instance : golds.instances) {
    if (!pred_counts.count(instance.id)) missing += " +gold:" + instance.id;
  }
  for (const auto& [id, count] : pred_counts) {
    if (!gold_ids.count(id)) missing += " +pred:" + id;
  }
  if (!missing.empty()) {
    throw std::invalid_argument("count id mismatch;" + missing);
  }

  double squared = 0.0;
  long exact = 0;
  for (const auto& instance : golds.instances) {
    const int predicted = pred_counts.at(instance.id);
    const int actual = static_cast<int>(instance.tuple_count());
    const double diff = predicted - actual;
    squared += diff * diff;
    if (predicted == actual) ++exact;
  }
  const double n = static_cast<double>(golds.instances.size());
  return CountMetrics{std::sqrt(squared / n), exact / n};
}

double timing_harness(const std::function<void()>& run) {
  const auto begin = std::chrono::steady_clock::now();
  run();
  const auto end = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(end - begin).count();
}

std::vector<SlicePredicate> builtin_slices() {
  std::vector<SlicePredicate> slices;
  slices.push_back(
      {"implicit", [](const Instance& i) { return has_implicit_terms(i); }});
  slices.push_back({"complex", [](const Instance& i) {
                      if (i.tuple_count() > 3) return true;
                      std::istringstream in(i.sentence);
                      std::string word;
                      int words = 0;
                      while (in >> word) ++words;
                      return words > 22;
                    }});
  return slices;
}

EvalReport slice_report(const DatasetSplit& split,
                        std::span<const Prediction> preds, bool filter_on,
                        std::span<const SlicePredicate> slices) {
  std::map<std::string, const Prediction*> by_id;
  for (const auto& prediction : preds) {
    by_id[prediction.id] = &prediction;
  }
  EvalReport report = score_f1(preds, gold_predictions(split), filter_on);
  for (const auto& slice : slices) {
    DatasetSplit subset{split.name, {}};
    std::vector<Prediction> subset_preds;
    for (const auto& instance : split.instances) {
      if (!slice.test(instance)) continue;
      subset.instances.push_back(instance);
      subset_preds.push_back(*by_id.at(instance.id));
    }
    if (subset.instances.empty()) continue;
    report.slices[slice.name] =
        score_f1(subset_preds, gold_predictions(subset), filter_on);
  }
  return report;
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["precision"] = precision;
  j["recall"] = recall;
  j["f1"] = f1;
  j["tp"] = tp;
  j["n_pred"] = n_pred;
  j["n_gold"] = n_gold;
  if (count_rmse >= 0.0) j["count_rmse"] = count_rmse;
  if (count_accuracy >= 0.0) j["count_accuracy"] = count_accuracy;
  if (wall_time_seconds >= 0.0) j["wall_time_seconds"] = wall_time_seconds;
  if (!slices.empty()) {
    j["slices"] = nlohmann::ordered_json::object();
    for (const auto& [name, slice] : slices) {
      j["slices"][name] = nlohmann::json::parse(slice.to_json());
    }
  }
  return j.dump(2);
}

std::string EvalReport::to_table() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %9s %9s %9s %7s %7s %7s\n", "slice",
                "precision", "recall", "f1", "tp", "pred", "gold");
  out << line;
  const auto row = [&](const std::string& name, const EvalReport& r) {
    std::snprintf(line, sizeof(line), "%-12s %9.4f %9.4f %9.4f %7ld %7ld %7ld\n",
                  name.c_str(), r.precision, r.recall, r.f1, r.tp, r.n_pred,
                  r.n_gold);
    out << line;
  };
  row("all", *this);
  for (const auto& [name, slice] : slices) row(name, slice);
  if (count_rmse >= 0.0) {
    std::snprintf(line, sizeof(line), "count rmse %.4f  accuracy %.4f\n",
                  count_rmse, count_accuracy);
    out << line;
  }
  if (wall_time_seconds >= 0.0) {
    std::snprintf(line, sizeof(line), "wall time %.3fs\n", wall_time_seconds);
    out << line;
  }
  return out.str();
}

}  // namespace absa
