#include "absa/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "absa/mock_model.hpp"
#include "absa/templating.hpp"

namespace absa {

namespace {

std::uint64_t fnv64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

struct PairRecord {
  std::string id;
  std::string input;
  std::string target;
};

void write_pairs(const std::filesystem::path& path,
                 std::span<const PairRecord> records) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write training pairs " + path.string());
  }
  for (const auto& record : records) {
    nlohmann::ordered_json j;
    j["id"] = record.id;
    j["input"] = record.input;
    j["target"] = record.target;
    out << j.dump() << '\n';
  }
}

std::vector<PairRecord> load_pairs(const std::filesystem::path& path,
                                   const std::string& missing_hint) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("missing training pairs " + path.string() +
                             "; run `" + missing_hint + "` first");
  }
  std::vector<PairRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      records.push_back(PairRecord{j.at("id").get<std::string>(),
                                   j.at("input").get<std::string>(),
                                   j.at("target").get<std::string>()});
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return records;
}

std::map<std::string, RankedViews> load_rankings_or_hint(
    const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw std::runtime_error("missing ranking cache " + path.string() +
                             "; run `rank` first");
  }
  return load_rankings(path);
}

std::vector<View> views_of(const RankedViews& ranked) {
  std::vector<View> views;
  views.reserve(ranked.entries.size());
  for (const auto& entry : ranked.entries) views.push_back(entry.view);
  return views;
}

const RankedViews& ranked_for(const std::map<std::string, RankedViews>& map,
                              const std::string& id) {
  const auto it = map.find(id);
  if (it == map.end()) {
    throw std::runtime_error("ranking cache lacks instance \"" + id +
                             "\"; re-run `rank`");
  }
  return it->second;
}

nlohmann::ordered_json count_metrics_json(const CountMetrics& metrics) {
  return {{"rmse", metrics.rmse}, {"accuracy", metrics.accuracy}};
}

}  // namespace

std::filesystem::path RunPaths::pairs(int stage) const {
  return root / "pairs" /
         (stage == 0 ? std::string("unified.jsonl")
                     : "stage" + std::to_string(stage) + ".jsonl");
}

std::filesystem::path RunPaths::checkpoint(int stage) const {
  return root / "checkpoints" /
         (stage == 0 ? std::string("unified")
                     : "stage" + std::to_string(stage));
}

std::filesystem::path RunPaths::train_report(int stage) const {
  return root / ("train" +
                 (stage == 0 ? std::string("-unified")
                             : "-stage" + std::to_string(stage)) +
                 ".json");
}

std::filesystem::path RunPaths::rankings(const std::string& split_stem,
                                         const ElementSet& elements,
                                         const std::string& signature) const {
  return cache_root /
         (split_stem + "." + elements.label() + "." + signature + ".jsonl");
}

Pipeline::Pipeline(ExperimentConfig config, std::ostream* log)
    : config_(std::move(config)), log_(log) {
  config_.validate();
  variant_ = variant_by_name(config_.variant);
  variant_.filtering = variant_.filtering && config_.filtering;

  paths_.root = config_.out_dir;
  if (const char* env = std::getenv(kCacheRootEnv); env && *env) {
    paths_.cache_root = std::filesystem::path(env) / config_.dataset_name;
  } else {
    paths_.cache_root = paths_.root / "cache";
  }
}

std::ostream& Pipeline::log() const { return log_ ? *log_ : std::cerr; }

DatasetSplit Pipeline::load_split(const std::string& path,
                                  const std::string& name,
                                  bool require_gold) const {
  if (path.empty()) {
    throw std::runtime_error("config has no " + name + " dataset path");
  }
  FileFormat format;
  if (config_.data_format == "legacy") {
    format = FileFormat::legacy;
  } else if (config_.data_format == "canonical") {
    format = FileFormat::canonical;
  } else {
    const auto ext = std::filesystem::path(path).extension().string();
    format = ext == ".jsonl" || ext == ".json" ? FileFormat::canonical
                                               : FileFormat::legacy;
  }
  std::vector<std::string> warnings;
  auto split = load_dataset(path, format, &warnings, require_gold);
  for (const auto& warning : warnings) {
    log() << "warning: " << warning << '\n';
  }
  split.name = name;
  return split;
}

std::shared_ptr<SeqModelAdapter> Pipeline::make_backbone() const {
  std::set<std::string> words;
  const auto absorb = [&](const std::string& path) {
    if (path.empty()) return;
    const auto split = load_split(path, "corpus", false);
    for (const auto& instance : split.instances) {
      std::istringstream in(instance.sentence);
      std::string word;
      while (in >> word) words.insert(word);
      for (const auto& tuple : instance.gold) {
        for (const auto* field :
             {&tuple.aspect, &tuple.category, &tuple.sentiment,
              &tuple.opinion}) {
          std::istringstream fin(*field);
          while (fin >> word) words.insert(word);
        }
      }
    }
  };
  absorb(config_.train_path);
  absorb(config_.dev_path);
  absorb(config_.test_path);
  std::vector<std::string> vocab(words.begin(), words.end());

  if (config_.backbone == "mock-uniform") {
    return MockSeqModel::uniform_model(std::move(vocab));
  }
  if (config_.backbone == "mock-adversarial") {
    return MockSeqModel::adversarial_model(std::move(vocab), run_seed(), 0.25);
  }
  throw std::runtime_error(
      "backbone \"" + config_.backbone +
      "\" is not runnable in-process; built-in backbones: mock-uniform, "
      "mock-adversarial");
}

std::string Pipeline::ranking_signature() const {
  const std::string order =
      variant_.entropy_ranking
          ? view_scorer_name(config_.scorer)
          : "random-" + std::to_string(run_seed());
  return config_.backbone + "." + order;
}

std::vector<RankedViews> Pipeline::rank_split(const DatasetSplit& split,
                                              const ElementSet& elements,
                                              SeqModelAdapter& model) const {
  std::vector<RankedViews> rankings;
  rankings.reserve(split.instances.size());
  if (variant_.entropy_ranking) {
    for (const auto& instance : split.instances) {
      rankings.push_back(
          rank_views(model, instance, elements, config_.scorer));
    }
    return rankings;
  }
  // Random-order ablation: a seeded per-instance shuffle stands in for
  // the scores; positions become the scores so caches stay ordered.
  const auto pool = enumerate_views(elements);
  for (const auto& instance : split.instances) {
    auto views = pool;
    std::mt19937_64 rng(run_seed() ^ fnv64(instance.id));
    std::shuffle(views.begin(), views.end(), rng);
    RankedViews ranked;
    ranked.instance_id = instance.id;
    ranked.elements = elements;
    for (std::size_t i = 0; i < views.size(); ++i) {
      ranked.entries.push_back(ScoredView{views[i], views[i].render(),
                                          static_cast<double>(i)});
    }
    rankings.push_back(std::move(ranked));
  }
  return rankings;
}

void Pipeline::freeze_config() const {
  config_.save(paths_.frozen_config());
}

void Pipeline::cmd_rank() {
  freeze_config();
  const auto model = make_backbone();
  const auto sets = std::vector<ElementSet>{variant_.stage1_elements,
                                            ElementSet::acso()};
  const auto rank_file = [&](const std::string& path, const std::string& name,
                             bool require_gold) {
    const auto split = load_split(path, name, require_gold);
    for (const auto& elements : sets) {
      const auto rankings = rank_split(split, elements, *model);
      const auto out = paths_.rankings(stem_of(path), elements,
                                       ranking_signature());
      write_rankings(out, rankings);
      log() << "ranked " << rankings.size() << " instances (" << name << ", "
            << elements.label() << ") -> " << out.string() << '\n';
    }
  };
  rank_file(config_.train_path, "train", true);
  if (!config_.test_path.empty() && config_.test_path != config_.train_path) {
    rank_file(config_.test_path, "test", false);
  }
}

void Pipeline::cmd_build() {
  freeze_config();
  const auto train = load_split(config_.train_path, "train", true);
  const auto stem = stem_of(config_.train_path);
  const auto stage1_map = load_rankings_or_hint(paths_.rankings(
      stem, variant_.stage1_elements, ranking_signature()));
  const auto stage2_map = load_rankings_or_hint(
      paths_.rankings(stem, ElementSet::acso(), ranking_signature()));

  std::vector<PairRecord> stage1_pairs;
  std::vector<PairRecord> stage2_pairs;
  for (const auto& instance : train.instances) {
    Instance capped = instance;
    if (!variant_.multi_view && capped.gold.size() > 1) {
      capped.gold.resize(1);
    }
    const auto views1 = views_of(ranked_for(stage1_map, instance.id));
    const auto views2 = views_of(ranked_for(stage2_map, instance.id));
    const auto target1 = build_stage1_target(capped, views1);
    const auto pair2 = build_stage2_pair(capped, views2);
    stage1_pairs.push_back(
        PairRecord{instance.id, capped.sentence, target1.text});
    if (variant_.two_stage) {
      stage2_pairs.push_back(
          PairRecord{instance.id, pair2.input_text, pair2.target_text});
    } else {
      // Merged variant: same interleaved target, no template prompt.
      stage2_pairs.push_back(
          PairRecord{instance.id, capped.sentence, pair2.target_text});
    }
  }
  if (variant_.two_stage) {
    write_pairs(paths_.pairs(1), stage1_pairs);
    write_pairs(paths_.pairs(2), stage2_pairs);
    log() << "built " << stage1_pairs.size() << " stage-1 and "
          << stage2_pairs.size() << " stage-2 pairs\n";
  } else {
    write_pairs(paths_.pairs(0), stage2_pairs);
    log() << "built " << stage2_pairs.size() << " merged-stage pairs\n";
  }
}

void Pipeline::cmd_train(int stage) {
  freeze_config();
  if (stage != 1 && stage != 2) {
    throw std::invalid_argument("train stage must be 1 or 2");
  }
  if (!variant_.two_stage && stage == 2) {
    throw std::runtime_error("variant " + variant_.name +
                             " trains a single merged stage; run `train "
                             "--stage 1`");
  }
  const int slot = variant_.two_stage ? stage : 0;
  const auto records = load_pairs(paths_.pairs(slot), "build");
  if (records.empty()) {
    throw std::runtime_error("training pair file " +
                             paths_.pairs(slot).string() + " is empty");
  }

  std::shared_ptr<SeqModelAdapter> base;
  if (stage == 1) {
    base = make_backbone();
  } else {
    const auto prior = paths_.checkpoint(1);
    if (!std::filesystem::exists(prior / "config.json")) {
      throw std::runtime_error("missing stage-1 checkpoint " +
                               prior.string() + "; run `train --stage 1` first");
    }
    base = load_checkpoint(prior);
  }

  std::vector<TrainPair> pairs;
  pairs.reserve(records.size());
  for (const auto& record : records) {
    pairs.push_back(TrainPair{record.input, record.target});
  }
  auto train_config = stage == 1 ? config_.stage1 : config_.stage2;
  FineTuneReport report;
  const auto model = fine_tune(base, pairs, train_config, &report);
  save_checkpoint(*model, paths_.checkpoint(slot));

  nlohmann::ordered_json j;
  j["stage"] = slot == 0 ? "unified" : std::to_string(stage);
  j["pairs"] = records.size();
  j["epochs_run"] = report.epochs_run;
  if (report.initial_loss) j["initial_loss"] = *report.initial_loss;
  j["checkpoint_tag"] = report.checkpoint_tag;
  j["base_tag"] = base->identity().checkpoint_tag;
  j["backbone"] = base->identity().backbone;
  std::ofstream(paths_.train_report(slot)) << j.dump(2) << '\n';
  log() << "trained stage " << (slot == 0 ? "unified" : std::to_string(stage))
        << " on " << records.size() << " pairs; checkpoint "
        << report.checkpoint_tag << '\n';
}

void Pipeline::cmd_infer() {
  freeze_config();
  const auto test = load_split(config_.test_path, "test", false);
  const auto stage2_map = load_rankings_or_hint(paths_.rankings(
      stem_of(config_.test_path), ElementSet::acso(), ranking_signature()));

  const auto checkpoint_or_hint = [&](int slot, const std::string& hint) {
    const auto dir = paths_.checkpoint(slot);
    if (!std::filesystem::exists(dir / "config.json")) {
      throw std::runtime_error("missing checkpoint " + dir.string() +
                               "; run `" + hint + "` first");
    }
    return load_checkpoint(dir);
  };

  std::shared_ptr<SeqModelAdapter> unified_model;
  std::shared_ptr<SeqModelAdapter> stage1_model;
  std::shared_ptr<SeqModelAdapter> stage2_model;
  if (!variant_.two_stage) {
    unified_model = checkpoint_or_hint(0, "train --stage 1");
  } else {
    if (variant_.multi_view) {
      stage1_model = checkpoint_or_hint(1, "train --stage 1");
    }
    stage2_model = checkpoint_or_hint(2, "train --stage 2");
  }

  DecodeOptions stage1_options{config_.beam_width,
                               config_.stage1.max_target_tokens};
  DecodeOptions stage2_options{config_.beam_width,
                               config_.stage2.max_target_tokens};

  std::vector<Prediction> predictions;
  int fallbacks = 0;
  int clipped = 0;
  int over_six = 0;
  const double seconds = timing_harness([&] {
    for (const auto& instance : test.instances) {
      std::vector<SentimentTuple> tuples;
      if (!variant_.two_stage) {
        const auto text =
            generate(*unified_model, instance.sentence,
                     DecodeConstraint::unified(), stage2_options);
        auto parsed = parse_tuples_free(text, ElementSet::acso());
        if (parsed.ok()) tuples = std::move(parsed.value().tuples);
      } else {
        int khat = 1;
        if (variant_.multi_view) {
          const auto stage1_text =
              generate(*stage1_model, instance.sentence,
                       DecodeConstraint::stage1(variant_.stage1_elements),
                       stage1_options);
          auto parsed = parse_template(stage1_text, variant_.stage1_elements,
                                       config_.parse_mode);
          if (parsed.ok()) {
            khat = static_cast<int>(parsed.value().result.views().size());
          } else {
            // Total stage-1 failure degrades to the single best view.
            ++fallbacks;
            log() << "warning: instance " << instance.id
                  << ": unusable stage-1 output (" << parsed.error().describe()
                  << "); falling back to one view\n";
          }
        }
        if (khat > 24) {
          ++clipped;
          khat = 24;
        }
        if (khat > 6) {
          ++over_six;
          log() << "warning: instance " << instance.id << ": template asks "
                << khat << " views (over the 6-permutation stage-1 pool)\n";
        }
        const auto& ranked = ranked_for(stage2_map, instance.id);
        const auto tmpl = OrderTemplate::of(ranked.top(khat));
        const auto input = instance.sentence + " " + render_template(tmpl);
        const auto stage2_text = generate(*stage2_model, input,
                                          DecodeConstraint::stage2(tmpl),
                                          stage2_options);
        auto parsed = parse_tuples(stage2_text, tmpl, config_.parse_mode);
        if (parsed.ok()) {
          tuples = std::move(parsed.value().tuples);
        } else {
          log() << "warning: instance " << instance.id
                << ": unusable stage-2 output ("
                << parsed.error().describe() << ")\n";
        }
      }
      predictions.push_back(Prediction{instance.id, std::move(tuples)});
    }
  });

  write_predictions(paths_.predictions(), predictions);
  nlohmann::ordered_json j;
  j["instances"] = predictions.size();
  j["wall_time_seconds"] = seconds;
  j["stage1_fallbacks"] = fallbacks;
  j["khat_clipped_to_24"] = clipped;
  j["khat_over_6"] = over_six;
  std::ofstream(paths_.infer_report()) << j.dump(2) << '\n';
  log() << "inferred " << predictions.size() << " instances in " << seconds
        << "s -> " << paths_.predictions().string() << '\n';
}

EvalReport Pipeline::cmd_eval(const std::string& slice, bool no_filter) {
  freeze_config();
  if (!std::filesystem::exists(paths_.predictions())) {
    throw std::runtime_error("missing predictions " +
                             paths_.predictions().string() +
                             "; run `infer` first");
  }
  const auto predictions = load_predictions(paths_.predictions());
  auto test = load_split(config_.test_path, "test", false);
  const bool any_gold =
      std::any_of(test.instances.begin(), test.instances.end(),
                  [](const Instance& i) { return !i.gold.empty(); });
  if (!any_gold) {
    throw std::runtime_error("test split carries no gold tuples; nothing to "
                             "evaluate");
  }
  const bool filter_on = !no_filter && variant_.filtering;

  DatasetSplit scored_split = test;
  std::vector<Prediction> scored_preds = predictions;
  if (!slice.empty()) {
    const auto slices = builtin_slices();
    const auto it =
        std::find_if(slices.begin(), slices.end(),
                     [&](const SlicePredicate& s) { return s.name == slice; });
    if (it == slices.end()) {
      throw std::invalid_argument("unknown slice \"" + slice +
                                  "\" (built in: implicit, complex)");
    }
    std::map<std::string, const Prediction*> by_id;
    for (const auto& prediction : predictions) {
      by_id[prediction.id] = &prediction;
    }
    scored_split.instances.clear();
    scored_preds.clear();
    for (const auto& instance : test.instances) {
      if (!it->test(instance)) continue;
      const auto found = by_id.find(instance.id);
      if (found == by_id.end()) {
        throw std::runtime_error("predictions lack instance \"" + instance.id +
                                 "\"; re-run `infer`");
      }
      scored_split.instances.push_back(instance);
      scored_preds.push_back(*found->second);
    }
    if (scored_split.instances.empty()) {
      throw std::runtime_error("slice \"" + slice +
                               "\" matches no test instance");
    }
  }

  EvalReport report;
  if (slice.empty()) {
    const auto slices = builtin_slices();
    report = slice_report(scored_split, scored_preds, filter_on, slices);
  } else {
    report = score_f1(scored_preds, gold_predictions(scored_split), filter_on);
  }

  std::map<std::string, int> pred_counts;
  for (const auto& prediction : scored_preds) {
    pred_counts[prediction.id] = static_cast<int>(prediction.tuples.size());
  }
  const auto counts = count_metrics(pred_counts, scored_split);
  report.count_rmse = counts.rmse;
  report.count_accuracy = counts.accuracy;

  std::filesystem::create_directories(paths_.root);
  std::ofstream(paths_.eval_json()) << report.to_json() << '\n';
  std::ofstream(paths_.eval_table()) << report.to_table();
  return report;
}

std::string Pipeline::cmd_stats() {
  freeze_config();
  nlohmann::ordered_json stats;
  std::ostringstream text;

  DatasetSplit train;
  bool have_train = false;
  const auto describe = [&](const std::string& path, const std::string& name) {
    if (path.empty()) return DatasetSplit{};
    auto split = load_split(path, name, true);
    const auto dist = count_distribution(split);
    const auto implicit = implicit_slice(split);
    const double implicit_fraction =
        static_cast<double>(implicit.size()) / static_cast<double>(split.size());

    nlohmann::ordered_json entry;
    entry["instances"] = split.size();
    entry["ratios"] = nlohmann::ordered_json::object();
    for (const auto& [bucket, ratio] : dist.ratios) {
      entry["ratios"][std::to_string(bucket)] = ratio;
    }
    entry["implicit_fraction"] = implicit_fraction;
    stats[name] = entry;

    text << name << ": " << split.size() << " instances, implicit "
         << implicit_fraction << "\n  tuple-count ratios:";
    for (const auto& [bucket, ratio] : dist.ratios) {
      text << ' ' << bucket << (bucket == CountDistribution::kClipBucket
                                    ? "+"
                                    : "")
           << '=' << ratio;
    }
    text << '\n';
    return split;
  };

  train = describe(config_.train_path, "train");
  have_train = !train.instances.empty();
  describe(config_.dev_path, "dev");
  const auto test = describe(config_.test_path, "test");

  if (have_train) {
    const auto report_counts = [&](const std::string& split_name,
                                   const DatasetSplit& split) {
      nlohmann::ordered_json entry;
      const auto random =
          count_metrics(random_count_baseline(split, run_seed()), split);
      const auto majority =
          count_metrics(majority_count_baseline(split), split);
      const auto trained = count_metrics(
          classification_count_baseline(train, split, run_seed()), split);
      entry["random"] = count_metrics_json(random);
      entry["majority"] = count_metrics_json(majority);
      entry["classification"] = count_metrics_json(trained);
      stats["count_baselines"][split_name] = entry;
      text << split_name << " count baselines: random rmse " << random.rmse
           << " acc " << random.accuracy << "; majority rmse "
           << majority.rmse << " acc " << majority.accuracy
           << "; classification rmse " << trained.rmse << " acc "
           << trained.accuracy << '\n';
    };
    report_counts("train", train);
    if (!test.instances.empty()) report_counts("test", test);
  }

  std::filesystem::create_directories(paths_.root);
  std::ofstream(paths_.stats_json()) << stats.dump(2) << '\n';
  return text.str();
}

EvalReport Pipeline::cmd_cross_eval(const std::string& train_group,
                                    const std::string& test_group) {
  freeze_config();
  const auto group_of = [&](const std::string& name) {
    const auto it = config_.groups.find(name);
    if (it == config_.groups.end()) {
      throw std::invalid_argument("unknown dataset group \"" + name +
                                  "\"; define it under config key groups");
    }
    return it->second;
  };
  const auto source = group_of(train_group);
  const auto target = group_of(test_group);
  if (source.train.empty() || target.test.empty()) {
    throw std::invalid_argument("group \"" + train_group +
                                "\" needs train files and group \"" +
                                test_group + "\" needs test files");
  }

  const auto merge = [&](const std::vector<std::string>& paths,
                         const std::string& name, bool require_gold) {
    DatasetSplit merged;
    merged.name = name;
    for (const auto& path : paths) {
      const auto split = load_split(path, name, require_gold);
      merged.instances.insert(merged.instances.end(), split.instances.begin(),
                              split.instances.end());
    }
    return merged;
  };
  const auto tag = "cross_" + train_group + "_to_" + test_group;
  const auto data_dir = paths_.root / tag / "data";
  const auto train_file = data_dir / (tag + "_train.jsonl");
  const auto test_file = data_dir / (tag + "_test.jsonl");
  write_dataset(merge(source.train, "train", true), train_file);
  write_dataset(merge(target.test, "test", false), test_file);

  ExperimentConfig derived = config_;
  derived.dataset_name = config_.dataset_name + "-" + tag;
  derived.train_path = train_file.string();
  derived.dev_path.clear();
  derived.test_path = test_file.string();
  derived.data_format = "canonical";
  derived.out_dir = (paths_.root / tag).string();
  derived.seeds = {run_seed()};
  derived.groups.clear();

  Pipeline sub(derived, log_);
  return sub.run_all();
}

EvalReport Pipeline::run_all() {
  cmd_rank();
  cmd_build();
  cmd_train(1);
  if (variant_.two_stage) cmd_train(2);
  cmd_infer();
  return cmd_eval();
}

MultiseedReport Pipeline::cmd_multiseed() {
  freeze_config();
  MultiseedReport report;
  for (const auto seed : config_.seeds) {
    ExperimentConfig derived = config_;
    derived.seeds = {seed};
    derived.stage1.seed = seed;
    derived.stage2.seed = seed;
    derived.out_dir =
        (paths_.root / ("seed-" + std::to_string(seed))).string();
    Pipeline sub(derived, log_);
    const auto eval = sub.run_all();
    report.seeds.push_back(seed);
    report.f1_scores.push_back(eval.f1);
  }

  const double n = static_cast<double>(report.f1_scores.size());
  report.mean = std::accumulate(report.f1_scores.begin(),
                                report.f1_scores.end(), 0.0) /
                n;
  if (report.f1_scores.size() > 1) {
    double squared = 0.0;
    for (const double f1 : report.f1_scores) {
      squared += (f1 - report.mean) * (f1 - report.mean);
    }
    report.stddev = std::sqrt(squared / (n - 1.0));
  }

  nlohmann::ordered_json j;
  j["seeds"] = report.seeds;
  j["f1"] = report.f1_scores;
  j["mean"] = report.mean;
  j["stddev"] = report.stddev;
  std::filesystem::create_directories(paths_.root);
  std::ofstream(paths_.multiseed_json()) << j.dump(2) << '\n';
  return report;
}

}  // namespace absa
