#include "absa/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "absa/templating.hpp"

namespace absa {

ViewScorer view_scorer_from_name(const std::string& name) {
  if (name == "step_entropy") return ViewScorer::step_entropy;
  if (name == "sequence_nll") return ViewScorer::sequence_nll;
  throw std::invalid_argument("unknown view scorer \"" + name +
                              "\" (expected step_entropy or sequence_nll)");
}

std::string view_scorer_name(ViewScorer scorer) {
  return scorer == ViewScorer::step_entropy ? "step_entropy" : "sequence_nll";
}

std::vector<View> RankedViews::top(int k) const {
  if (k <= 0) throw std::invalid_argument("top: k must be positive");
  if (entries.empty()) throw std::invalid_argument("top: empty ranking");
  std::vector<View> views;
  views.reserve(k);
  for (int i = 0; i < k; ++i) {
    views.push_back(entries[i % entries.size()].view);
  }
  return views;
}

double step_entropy(std::span<const double> distribution) {
  double h = 0.0;
  for (const double p : distribution) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double sequence_entropy(std::span<const StepRecord> records) {
  double total = 0.0;
  for (const auto& record : records) {
    total += step_entropy(record.distribution);
  }
  return total;
}

double sequence_nll(std::span<const StepRecord> records) {
  double total = 0.0;
  for (std::size_t t = 0; t < records.size(); ++t) {
    const auto& record = records[t];
    if (record.target_index < 0 ||
        record.target_index >= static_cast<int>(record.distribution.size())) {
      throw std::runtime_error(
          "sequence_nll: step " + std::to_string(t) +
          " forces a token outside the scoring vocabulary");
    }
    total -= std::log(std::max(record.distribution[record.target_index],
                               1e-300));
  }
  return total;
}

double view_entropy(SeqModelAdapter& model, const std::string& sentence,
                    const View& view, ViewScorer scorer) {
  const auto records = score_stepwise(model, sentence, view.render());
  return scorer == ViewScorer::step_entropy ? sequence_entropy(records)
                                            : sequence_nll(records);
}

RankedViews rank_views(SeqModelAdapter& model, const Instance& instance,
                       const ElementSet& elements, ViewScorer scorer) {
  RankedViews ranked;
  ranked.instance_id = instance.id;
  ranked.elements = elements;
  for (const auto& view : enumerate_views(elements)) {
    auto rendered = view.render();
    double score = 0.0;
    try {
      score = view_entropy(model, instance.sentence, view, scorer);
    } catch (const std::exception& e) {
      throw std::runtime_error("scoring instance \"" + instance.id +
                               "\" view \"" + rendered + "\": " + e.what());
    }
    ranked.entries.push_back(ScoredView{view, std::move(rendered), score});
  }
  std::sort(ranked.entries.begin(), ranked.entries.end(),
            [](const ScoredView& a, const ScoredView& b) {
              if (a.score != b.score) return a.score < b.score;
              return a.rendered < b.rendered;
            });
  return ranked;
}

void write_rankings(const std::filesystem::path& path,
                    std::span<const RankedViews> rankings) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write ranking cache " + path.string());
  }
  for (const auto& ranked : rankings) {
    nlohmann::ordered_json record;
    record["id"] = ranked.instance_id;
    record["element_set"] = ranked.elements.label();
    record["entries"] = nlohmann::ordered_json::array();
    for (const auto& entry : ranked.entries) {
      record["entries"].push_back({entry.rendered, entry.score});
    }
    out << record.dump() << '\n';
  }
}

void cache_rankings(const DatasetSplit& split, SeqModelAdapter& model,
                    const ElementSet& elements,
                    const std::filesystem::path& path, ViewScorer scorer) {
  std::vector<RankedViews> rankings;
  rankings.reserve(split.instances.size());
  for (const auto& instance : split.instances) {
    rankings.push_back(rank_views(model, instance, elements, scorer));
  }
  write_rankings(path, rankings);
}

std::map<std::string, RankedViews> load_rankings(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read ranking cache " + path.string());
  }
  std::map<std::string, RankedViews> rankings;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::string id = "line " + std::to_string(line_no);
    try {
      const auto record = nlohmann::json::parse(line);
      id = record.at("id").get<std::string>();
      RankedViews ranked;
      ranked.instance_id = id;
      ranked.elements =
          ElementSet::from_label(record.at("element_set").get<std::string>());

      std::set<std::string> pool;
      for (const auto& view : enumerate_views(ranked.elements)) {
        pool.insert(view.render());
      }
      std::set<std::string> seen;
      double previous = -1.0;
      for (const auto& item : record.at("entries")) {
        auto rendered = item.at(0).get<std::string>();
        const auto score = item.at(1).get<double>();
        if (!pool.count(rendered)) {
          throw std::runtime_error("entry \"" + rendered +
                                   "\" is not a view of " +
                                   ranked.elements.label());
        }
        if (!seen.insert(rendered).second) {
          throw std::runtime_error("duplicate entry \"" + rendered + "\"");
        }
        if (score < previous) {
          throw std::runtime_error("scores not ascending at \"" + rendered +
                                   "\"");
        }
        previous = score;
        auto parsed =
            parse_template(rendered, ranked.elements, ParseMode::strict);
        ranked.entries.push_back(ScoredView{
            parsed.value().result.views().front(), std::move(rendered), score});
      }
      if (seen.size() != pool.size()) {
        throw std::runtime_error(
            "covers " + std::to_string(seen.size()) + " of " +
            std::to_string(pool.size()) + " views");
      }
      if (!rankings.emplace(id, std::move(ranked)).second) {
        throw std::runtime_error("duplicate record");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("ranking cache " + path.string() +
                               ": record \"" + id + "\": " + e.what());
    }
  }
  return rankings;
}

}  // namespace absa
