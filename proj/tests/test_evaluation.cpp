#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "absa/evaluation.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace absa;
using testsupport::TempDir;

namespace {

Prediction pred(const std::string& id,
                std::vector<SentimentTuple> tuples) {
  return Prediction{id, std::move(tuples)};
}

// Straight-line reference scorer: normalize, dedup via sorted unique
// vectors, count matches by scanning. Used to cross-check score_f1.
struct BruteCounts {
  long tp = 0;
  long n_pred = 0;
  long n_gold = 0;
};

BruteCounts brute_force(const std::vector<Prediction>& preds,
                        const std::vector<Prediction>& golds,
                        bool filter_on) {
  const auto keyed = [&](const std::vector<SentimentTuple>& tuples) {
    std::vector<std::array<std::string, 4>> keys;
    for (const auto& t : tuples) {
      const SentimentTuple n = normalize_tuple(t, filter_on);
      keys.push_back({n.aspect, n.category, n.sentiment, n.opinion});
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
  };

  BruteCounts counts;
  for (const auto& p : preds) {
    const Prediction* gold = nullptr;
    for (const auto& g : golds) {
      if (g.id == p.id) gold = &g;
    }
    REQUIRE(gold != nullptr);
    const auto pred_keys = keyed(p.tuples);
    const auto gold_keys = keyed(gold->tuples);
    counts.n_pred += static_cast<long>(pred_keys.size());
    counts.n_gold += static_cast<long>(gold_keys.size());
    for (const auto& key : pred_keys) {
      for (const auto& gkey : gold_keys) {
        if (key == gkey) {
          ++counts.tp;
          break;
        }
      }
    }
  }
  return counts;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("the embedded stop-word list is the standard 179-entry one") {
  const auto& words = english_stopwords();
  CHECK(words.size() == 179);
  CHECK(words.front() == "i");
  const std::set<std::string> set(words.begin(), words.end());
  CHECK(set.size() == words.size());
  for (const char* expected : {"the", "not", "was", "wasn't", "don't", "a"}) {
    CHECK(set.count(expected) == 1);
  }
  CHECK(set.count("pizza") == 0);
  CHECK(set.count("good") == 0);
}

TEST_CASE("normalization folds case and filters stop words") {
  const SentimentTuple raw{"The Pizza", "Food Quality", "Positive",
                           "not bad"};
  const SentimentTuple filtered = normalize_tuple(raw, true);
  CHECK(filtered.aspect == "pizza");
  CHECK(filtered.category == "food quality");
  CHECK(filtered.sentiment == "positive");
  CHECK(filtered.opinion == "bad");

  const SentimentTuple unfiltered = normalize_tuple(raw, false);
  CHECK(unfiltered.aspect == "the pizza");
  CHECK(unfiltered.opinion == "not bad");
  CHECK(unfiltered.sentiment == "positive");
}

TEST_CASE("a span of only stop words keeps its folded form") {
  const SentimentTuple raw{"The", "category", "positive", "Not The Most"};
  const SentimentTuple out = normalize_tuple(raw, true);
  CHECK(out.aspect == "the");
  CHECK(out.opinion == "not the most");
}

TEST_CASE("the null literal is never filtered") {
  const SentimentTuple raw{"null", "c", "positive", "null"};
  const SentimentTuple out = normalize_tuple(raw, true);
  CHECK(out.aspect == "null");
  CHECK(out.opinion == "null");
}

TEST_CASE("category and sentiment are folded but never stop-filtered") {
  const SentimentTuple raw{"a", "The General", "Positive", "o"};
  const SentimentTuple out = normalize_tuple(raw, true);
  CHECK(out.category == "the general");
  CHECK(out.sentiment == "positive");
}

TEST_CASE("normalization is idempotent over arbitrary text") {
  testsupport::Rng rng(83);
  for (int round = 0; round < 10000; ++round) {
    SentimentTuple t;
    t.aspect = testsupport::random_messy_text(rng);
    t.category = testsupport::random_messy_text(rng);
    t.sentiment = testsupport::random_messy_text(rng);
    t.opinion = testsupport::random_messy_text(rng);
    for (const bool filter_on : {true, false}) {
      const SentimentTuple once = normalize_tuple(t, filter_on);
      const SentimentTuple twice = normalize_tuple(once, filter_on);
      CHECK(twice == once);
    }
  }
}

TEST_CASE("identical prediction and gold sets score a perfect f1") {
  const std::vector<Prediction> golds = {
      pred("a", {{"pizza", "food quality", "positive", "great"}}),
      pred("b", {{"service", "service general", "negative", "slow"},
                 {"null", "restaurant general", "positive", "nice"}})};
  const EvalReport report = score_f1(golds, golds, true);
  CHECK(report.precision == 1.0);
  CHECK(report.recall == 1.0);
  CHECK(report.f1 == 1.0);
  CHECK(report.tp == 3);
  CHECK(report.n_pred == 3);
  CHECK(report.n_gold == 3);
}

TEST_CASE("empty predictions on every instance score zero without dividing") {
  const std::vector<Prediction> golds = {
      pred("a", {{"pizza", "food quality", "positive", "great"}})};
  const std::vector<Prediction> empty = {pred("a", {})};
  const EvalReport report = score_f1(empty, golds, true);
  CHECK(report.precision == 0.0);
  CHECK(report.recall == 0.0);
  CHECK(report.f1 == 0.0);
  CHECK(report.n_pred == 0);

  // Both sides empty: all ratios are the 0/0 convention.
  const EvalReport nothing = score_f1(empty, empty, true);
  CHECK(nothing.f1 == 0.0);
  CHECK(nothing.precision == 0.0);
  CHECK(nothing.recall == 0.0);
}

TEST_CASE("duplicate predicted tuples count once") {
  const std::vector<Prediction> golds = {
      pred("a", {{"pizza", "food quality", "positive", "great"}})};
  const std::vector<Prediction> dup = {
      pred("a", {{"pizza", "food quality", "positive", "great"},
                 {"Pizza", "Food Quality", "Positive", "GREAT"},
                 {"pizza", "food quality", "positive", "the great"}})};
  // All three normalize to the same key under filtering.
  const EvalReport report = score_f1(dup, golds, true);
  CHECK(report.n_pred == 1);
  CHECK(report.tp == 1);
  CHECK(report.f1 == 1.0);

  // Without filtering, "the great" stays distinct.
  const EvalReport unfiltered = score_f1(dup, golds, false);
  CHECK(unfiltered.n_pred == 2);
  CHECK(unfiltered.tp == 1);
}

TEST_CASE("normalization bridges surface variants between sides") {
  const std::vector<Prediction> golds = {
      pred("a", {{"the pizza", "food quality", "positive", "not bad"}})};
  const std::vector<Prediction> preds_v = {
      pred("a", {{"Pizza", "Food quality", "POSITIVE", "bad"}})};
  CHECK(score_f1(preds_v, golds, true).f1 == 1.0);
  CHECK(score_f1(preds_v, golds, false).f1 == 0.0);
}

TEST_CASE("id mismatches are reported from both directions") {
  const std::vector<Prediction> golds = {
      pred("a", {{"x", "c", "positive", "o"}})};
  const std::vector<Prediction> preds_v = {
      pred("b", {{"x", "c", "positive", "o"}})};
  try {
    score_f1(preds_v, golds, true);
    FAIL("expected mismatch error");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("id mismatch") != std::string::npos);
    CHECK(what.find("+pred:b") != std::string::npos);
    CHECK(what.find("+gold:a") != std::string::npos);
  }
}

TEST_CASE("duplicate prediction records are rejected") {
  const std::vector<Prediction> twice = {
      pred("a", {{"x", "c", "positive", "o"}}),
      pred("a", {{"y", "c", "negative", "p"}})};
  CHECK_THROWS_AS(score_f1(twice, twice, true), std::invalid_argument);
}

TEST_CASE("score_f1 matches a brute-force scorer on random corpora") {
  testsupport::Rng rng(89);
  for (int round = 0; round < 200; ++round) {
    std::vector<Prediction> golds;
    std::vector<Prediction> preds_v;
    const int n = 1 + rng.below(10);
    for (int i = 0; i < n; ++i) {
      const std::string id = "r" + std::to_string(round) + "-" +
                             std::to_string(i);
      const Instance gold = testsupport::random_instance(rng, id, 4);
      golds.push_back(pred(id, gold.gold));

      // Predictions share some gold tuples, mutate others, add noise.
      std::vector<SentimentTuple> guesses;
      for (const auto& tuple : gold.gold) {
        if (rng.chance(2)) {
          guesses.push_back(tuple);
          if (rng.chance(3)) guesses.push_back(tuple);  // duplicate noise
        } else if (!rng.chance(3)) {
          SentimentTuple off = tuple;
          off.sentiment = off.sentiment == "positive" ? "negative"
                                                      : "positive";
          guesses.push_back(off);
        }
      }
      if (rng.chance(2)) guesses.push_back(testsupport::random_tuple(rng));
      preds_v.push_back(pred(id, std::move(guesses)));
    }

    const bool filter_on = rng.chance(2);
    const EvalReport report = score_f1(preds_v, golds, filter_on);
    const BruteCounts expected = brute_force(preds_v, golds, filter_on);
    CHECK(report.tp == expected.tp);
    CHECK(report.n_pred == expected.n_pred);
    CHECK(report.n_gold == expected.n_gold);

    const double p = expected.n_pred == 0
                         ? 0.0
                         : double(expected.tp) / double(expected.n_pred);
    const double r = expected.n_gold == 0
                         ? 0.0
                         : double(expected.tp) / double(expected.n_gold);
    const double f = p + r == 0.0 ? 0.0 : 2 * p * r / (p + r);
    CHECK(report.precision == doctest::Approx(p).epsilon(1e-12));
    CHECK(report.recall == doctest::Approx(r).epsilon(1e-12));
    CHECK(report.f1 == doctest::Approx(f).epsilon(1e-12));
    CHECK(report.tp <= std::min(report.n_pred, report.n_gold));
  }
}

TEST_CASE("scoring is invariant to instance and tuple order") {
  testsupport::Rng rng(97);
  std::vector<Prediction> golds;
  std::vector<Prediction> preds_v;
  for (int i = 0; i < 8; ++i) {
    const Instance gold =
        testsupport::random_instance(rng, "o" + std::to_string(i), 4);
    golds.push_back(pred(gold.id, gold.gold));
    auto guessed = gold.gold;
    if (rng.chance(2)) guessed.pop_back();
    preds_v.push_back(pred(gold.id, guessed));
  }
  const EvalReport base = score_f1(preds_v, golds, true);

  std::reverse(golds.begin(), golds.end());
  std::reverse(preds_v.begin(), preds_v.end());
  for (auto& p : preds_v) std::reverse(p.tuples.begin(), p.tuples.end());
  const EvalReport shuffled = score_f1(preds_v, golds, true);
  CHECK(shuffled.tp == base.tp);
  CHECK(shuffled.f1 == base.f1);
  CHECK(shuffled.n_pred == base.n_pred);
}

TEST_CASE("prediction files round-trip") {
  TempDir dir("preds");
  const std::vector<Prediction> predictions = {
      pred("a", {{"pizza", "food quality", "positive", "great"}}),
      pred("b", {}),
      pred("c", {{"null", "service general", "negative", "wasn't nice"},
                 {"staff", "service general", "negative", "rude"}})};
  const auto path = dir / "predictions.jsonl";
  write_predictions(path, predictions);
  const auto back = load_predictions(path);
  REQUIRE(back.size() == predictions.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].id == predictions[i].id);
    CHECK(back[i].tuples == predictions[i].tuples);
  }

  CHECK_THROWS_AS(load_predictions(dir / "missing.jsonl"),
                  std::runtime_error);
}

TEST_CASE("malformed prediction lines carry the line number") {
  TempDir dir("preds");
  const auto path = dir / "bad.jsonl";
  {
    std::ofstream out(path);
    out << R"({"id":"a","tuples":[]})" << '\n';
    out << R"({"id":"b","tuples":[["only","three","fields"]]})" << '\n';
  }
  try {
    load_predictions(path);
    FAIL("expected arity error");
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    CHECK(what.find(":2:") != std::string::npos);
    CHECK(what.find("tuple arity 3") != std::string::npos);
  }
}

TEST_CASE("count metrics on a worked example") {
  DatasetSplit split;
  split.name = "test";
  const std::vector<int> gold_counts = {1, 2, 3};
  for (std::size_t i = 0; i < gold_counts.size(); ++i) {
    Instance instance;
    instance.id = "c" + std::to_string(i);
    instance.sentence = "s";
    for (int k = 0; k < gold_counts[i]; ++k) {
      instance.gold.push_back({"a", "c", "positive", "o"});
    }
    split.instances.push_back(std::move(instance));
  }

  const std::map<std::string, int> perfect = {{"c0", 1}, {"c1", 2}, {"c2", 3}};
  const CountMetrics exact = count_metrics(perfect, split);
  CHECK(exact.rmse == 0.0);
  CHECK(exact.accuracy == 1.0);

  const std::map<std::string, int> off = {{"c0", 1}, {"c1", 2}, {"c2", 5}};
  const CountMetrics approx = count_metrics(off, split);
  CHECK(approx.rmse == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-12));
  CHECK(approx.accuracy == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  const std::map<std::string, int> partial = {{"c0", 1}};
  CHECK_THROWS_AS(count_metrics(partial, split), std::invalid_argument);
  CHECK_THROWS_AS(count_metrics(perfect, DatasetSplit{}),
                  std::invalid_argument);
}

TEST_CASE("builtin slices select implicit and complex instances") {
  const auto slices = builtin_slices();
  REQUIRE(slices.size() == 2);
  CHECK(slices[0].name == "implicit");
  CHECK(slices[1].name == "complex");

  Instance plain;
  plain.sentence = "short sentence";
  plain.gold.push_back({"a", "c", "positive", "o"});
  CHECK_FALSE(slices[0].test(plain));
  CHECK_FALSE(slices[1].test(plain));

  Instance implicit = plain;
  implicit.gold[0].opinion = "null";
  CHECK(slices[0].test(implicit));

  Instance many = plain;
  for (int i = 0; i < 3; ++i) many.gold.push_back({"a", "c", "neutral", "o"});
  CHECK(many.gold.size() == 4);
  CHECK(slices[1].test(many));

  Instance wordy = plain;
  wordy.sentence.clear();
  for (int i = 0; i < 23; ++i) wordy.sentence += "word ";
  CHECK(slices[1].test(wordy));

  Instance boundary = plain;
  boundary.sentence.clear();
  for (int i = 0; i < 22; ++i) boundary.sentence += "word ";
  CHECK_FALSE(slices[1].test(boundary));
}

TEST_CASE("slice report scores the whole split plus each subset") {
  const DatasetSplit split = load_dataset(
      testsupport::fixture_path("reviews_train.txt"), FileFormat::legacy);
  const auto golds = gold_predictions(split);
  const auto slices = builtin_slices();
  const EvalReport report = slice_report(split, golds, true, slices);
  CHECK(report.f1 == 1.0);
  REQUIRE(report.slices.count("implicit") == 1);
  CHECK(report.slices.at("implicit").f1 == 1.0);
  CHECK(report.slices.at("implicit").n_gold == 6);
  CHECK(report.n_gold == 17);
}

TEST_CASE("eval report json omits unmeasured metrics") {
  EvalReport report;
  report.precision = 0.5;
  report.recall = 0.25;
  report.f1 = 1.0 / 3.0;
  CHECK(report.to_json().find("count_rmse") == std::string::npos);
  CHECK(report.to_json().find("wall_time") == std::string::npos);
  report.count_rmse = 1.0;
  report.count_accuracy = 0.5;
  report.wall_time_seconds = 2.0;
  CHECK(report.to_json().find("count_rmse") != std::string::npos);
  CHECK(report.to_json().find("wall_time_seconds") != std::string::npos);
  CHECK(report.to_table().find("all") != std::string::npos);
}

TEST_CASE("timing harness measures nonnegative wall time") {
  const double seconds = timing_harness([] {
    volatile int sink = 0;
    for (int i = 0; i < 1000; ++i) sink += i;
  });
  CHECK(seconds >= 0.0);
  CHECK(seconds < 10.0);
}

}  // TEST_SUITE
