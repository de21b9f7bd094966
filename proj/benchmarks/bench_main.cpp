// Microbenchmarks for the pipeline hot paths: view enumeration, target
// building and parsing, entropy ranking, constrained decoding, and the
// micro-F1 scorer. All inputs are synthesized in-process.

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "absa/evaluation.hpp"
#include "absa/mock_model.hpp"
#include "absa/model.hpp"
#include "absa/ranking.hpp"
#include "absa/templating.hpp"
#include "absa/types.hpp"

using namespace absa;

namespace {

std::string word_for(std::mt19937_64& rng) {
  const int length = 3 + static_cast<int>(rng() % 6);
  std::string word;
  for (int i = 0; i < length; ++i) {
    word.push_back(static_cast<char>('a' + rng() % 26));
  }
  return word;
}

std::string span_for(std::mt19937_64& rng, int max_words) {
  const int words = 1 + static_cast<int>(rng() % max_words);
  std::string span;
  for (int i = 0; i < words; ++i) {
    if (i > 0) span.push_back(' ');
    span += word_for(rng);
  }
  return span;
}

Instance instance_for(std::mt19937_64& rng, int id, int tuples) {
  static const char* polarities[] = {"positive", "negative", "neutral"};
  Instance instance;
  instance.id = "bench-" + std::to_string(id);
  instance.sentence = span_for(rng, 12);
  for (int t = 0; t < tuples; ++t) {
    instance.gold.push_back(SentimentTuple{
        span_for(rng, 2), word_for(rng) + " " + word_for(rng),
        polarities[rng() % 3], span_for(rng, 2)});
  }
  return instance;
}

std::vector<std::string> vocab_for(std::mt19937_64& rng, int extra) {
  std::vector<std::string> vocab = {"null", "positive", "negative", "neutral"};
  for (int i = 0; i < extra; ++i) vocab.push_back(word_for(rng));
  return vocab;
}

}  // namespace

static void BM_EnumerateViews(benchmark::State& state) {
  const auto elements =
      state.range(0) == 3 ? ElementSet::acs() : ElementSet::acso();
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_views(elements));
  }
}
BENCHMARK(BM_EnumerateViews)->Arg(3)->Arg(4);

static void BM_BuildAndParseStage2(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const auto pool = enumerate_views(ElementSet::acso());
  const auto instance = instance_for(rng, 0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto pair = build_stage2_pair(instance, pool);
    const auto tmpl = OrderTemplate::of(pair.views);
    auto parsed = parse_tuples(pair.target_text, tmpl, ParseMode::strict);
    benchmark::DoNotOptimize(parsed);
  }
}
BENCHMARK(BM_BuildAndParseStage2)->Arg(1)->Arg(3)->Arg(6);

static void BM_ParseTuplesRepair(benchmark::State& state) {
  std::mt19937_64 rng(12);
  const auto pool = enumerate_views(ElementSet::acso());
  const auto instance = instance_for(rng, 1, 3);
  const auto pair = build_stage2_pair(instance, pool);
  const auto tmpl = OrderTemplate::of(pair.views);
  // A stray segment forces the recovery path on every round.
  const auto damaged = pair.target_text + " [SSEP] stray words only";
  for (auto _ : state) {
    auto parsed = parse_tuples(damaged, tmpl, ParseMode::repair);
    benchmark::DoNotOptimize(parsed);
  }
}
BENCHMARK(BM_ParseTuplesRepair);

static void BM_RankViews(benchmark::State& state) {
  std::mt19937_64 rng(13);
  const auto model = MockSeqModel::adversarial_model(vocab_for(rng, 80), 5);
  const auto instance = instance_for(rng, 2, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rank_views(*model, instance, ElementSet::acso()));
  }
}
BENCHMARK(BM_RankViews);

static void BM_ConstrainedGenerate(benchmark::State& state) {
  std::mt19937_64 rng(14);
  const auto model = MockSeqModel::adversarial_model(vocab_for(rng, 80), 7,
                                                     0.25);
  const auto pool = enumerate_views(ElementSet::acso());
  std::vector<View> views(pool.begin(),
                          pool.begin() + static_cast<long>(state.range(0)));
  const auto tmpl = OrderTemplate::of(views);
  const DecodeOptions options{1, 128};
  const auto input = span_for(rng, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        generate(*model, input, DecodeConstraint::stage2(tmpl), options));
  }
}
BENCHMARK(BM_ConstrainedGenerate)->Arg(1)->Arg(3)->Arg(6);

static void BM_ScoreF1(benchmark::State& state) {
  std::mt19937_64 rng(15);
  std::vector<Prediction> preds;
  std::vector<Prediction> golds;
  for (int i = 0; i < 1000; ++i) {
    const auto instance = instance_for(rng, i, 1 + static_cast<int>(rng() % 3));
    auto predicted = instance.gold;
    if (rng() % 4 == 0) predicted.push_back(instance.gold.front());
    preds.push_back(Prediction{instance.id, std::move(predicted)});
    golds.push_back(Prediction{instance.id, instance.gold});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(score_f1(preds, golds, true));
  }
}
BENCHMARK(BM_ScoreF1);

static void BM_NormalizeTuple(benchmark::State& state) {
  const SentimentTuple tuple{"the very Best pizza", "food quality",
                             "positive", "not at all bad"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize_tuple(tuple, true));
  }
}
BENCHMARK(BM_NormalizeTuple);

BENCHMARK_MAIN();
