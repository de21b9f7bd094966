#include "absa/config.hpp"

#include <fstream>

#include <json.hpp>

namespace absa {

namespace {

nlohmann::ordered_json train_config_json(const TrainConfig& config) {
  nlohmann::ordered_json j;
  j["learning_rate"] = config.learning_rate;
  j["train_batch"] = config.train_batch;
  j["infer_batch"] = config.infer_batch;
  j["epochs"] = config.epochs;
  j["seed"] = config.seed;
  j["optimizer"] = config.optimizer;
  j["stage"] = config.stage;
  j["max_target_tokens"] = config.max_target_tokens;
  return j;
}

TrainConfig train_config_from(const nlohmann::json& j, int stage) {
  TrainConfig config = TrainConfig::for_stage(stage);
  config.learning_rate = j.value("learning_rate", config.learning_rate);
  config.train_batch = j.value("train_batch", config.train_batch);
  config.infer_batch = j.value("infer_batch", config.infer_batch);
  config.epochs = j.value("epochs", config.epochs);
  config.seed = j.value("seed", config.seed);
  config.optimizer = j.value("optimizer", config.optimizer);
  config.stage = j.value("stage", stage);
  config.max_target_tokens =
      j.value("max_target_tokens", config.max_target_tokens);
  return config;
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read config " + path.string());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("config " + path.string() + ": " + e.what());
  }

  ExperimentConfig config;
  config.dataset_name = j.value("dataset_name", config.dataset_name);
  config.train_path = j.value("train_path", config.train_path);
  config.dev_path = j.value("dev_path", config.dev_path);
  config.test_path = j.value("test_path", config.test_path);
  config.data_format = j.value("data_format", config.data_format);
  config.backbone = j.value("backbone", config.backbone);
  if (j.contains("stage1")) {
    config.stage1 = train_config_from(j.at("stage1"), 1);
  }
  if (j.contains("stage2")) {
    config.stage2 = train_config_from(j.at("stage2"), 2);
  }
  config.scorer =
      view_scorer_from_name(j.value("scorer", view_scorer_name(config.scorer)));
  config.beam_width = j.value("beam_width", config.beam_width);
  config.filtering = j.value("filtering", config.filtering);
  config.parse_mode = j.value("strict_parse", false) ? ParseMode::strict
                                                     : ParseMode::repair;
  config.variant = j.value("variant", config.variant);
  if (j.contains("seeds")) {
    config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  }
  config.out_dir = j.value("out_dir", config.out_dir);
  if (j.contains("groups")) {
    for (const auto& [name, group] : j.at("groups").items()) {
      ExperimentConfig::DatasetGroup parsed;
      parsed.train = group.at("train").get<std::vector<std::string>>();
      parsed.test = group.at("test").get<std::vector<std::string>>();
      config.groups.emplace(name, std::move(parsed));
    }
  }
  config.validate();
  return config;
}

void ExperimentConfig::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  nlohmann::ordered_json j;
  j["dataset_name"] = dataset_name;
  j["train_path"] = train_path;
  j["dev_path"] = dev_path;
  j["test_path"] = test_path;
  j["data_format"] = data_format;
  j["backbone"] = backbone;
  j["stage1"] = train_config_json(stage1);
  j["stage2"] = train_config_json(stage2);
  j["scorer"] = view_scorer_name(scorer);
  j["beam_width"] = beam_width;
  j["filtering"] = filtering;
  j["strict_parse"] = parse_mode == ParseMode::strict;
  j["variant"] = variant;
  j["seeds"] = seeds;
  j["out_dir"] = out_dir;
  j["groups"] = nlohmann::ordered_json::object();
  for (const auto& [name, group] : groups) {
    j["groups"][name] = {{"train", group.train}, {"test", group.test}};
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write config " + path.string());
  }
  out << j.dump(2) << '\n';
}

void ExperimentConfig::validate() const {
  if (data_format != "auto" && data_format != "legacy" &&
      data_format != "canonical") {
    throw std::invalid_argument("data_format must be auto, legacy, or canonical");
  }
  if (beam_width < 1) {
    throw std::invalid_argument("beam_width must be at least 1");
  }
  if (seeds.empty()) {
    throw std::invalid_argument("seeds must not be empty");
  }
  stage1.validate();
  stage2.validate();
}

}  // namespace absa
