#include <cmath>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "absa/dataset.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace absa;
using testsupport::TempDir;

namespace {

std::filesystem::path write_lines(const TempDir& dir, const std::string& name,
                                  const std::vector<std::string>& lines) {
  const auto path = dir / name;
  std::ofstream out(path);
  for (const auto& line : lines) out << line << '\n';
  return path;
}

DatasetSplit split_with_counts(const std::vector<int>& counts) {
  DatasetSplit split;
  split.name = "train";
  testsupport::Rng rng(11);
  int i = 0;
  for (const int count : counts) {
    Instance instance;
    instance.id = "synthetic-" + std::to_string(i++);
    instance.sentence = testsupport::random_span(rng, 6, false);
    for (int k = 0; k < count; ++k) {
      instance.gold.push_back(testsupport::random_tuple(rng));
    }
    split.instances.push_back(std::move(instance));
  }
  return split;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("legacy line with one quadruple") {
  TempDir dir("legacy");
  const auto path = write_lines(
      dir, "train.txt",
      {"great pizza !####[['pizza', 'food quality', 'positive', 'great']]"});
  const DatasetSplit split = load_dataset(path, FileFormat::legacy);
  REQUIRE(split.size() == 1);
  const Instance& instance = split.instances[0];
  CHECK(instance.sentence == "great pizza !");
  CHECK(instance.gold[0] ==
        SentimentTuple{"pizza", "food quality", "positive", "great"});
  CHECK(instance.id == "train-00001");
  CHECK(split.name == "train");
}

TEST_CASE("legacy line with several tuples and mixed quote styles") {
  TempDir dir("legacy");
  const auto path = write_lines(
      dir, "rest_train.txt",
      {"the staff wasn't nice####[[\"staff\", 'service general', "
       "'negative', \"wasn't nice\"], ['null', 'restaurant general', "
       "'neutral', 'null']]"});
  const DatasetSplit split = load_dataset(path, FileFormat::legacy);
  REQUIRE(split.size() == 1);
  REQUIRE(split.instances[0].gold.size() == 2);
  CHECK(split.instances[0].gold[0].opinion == "wasn't nice");
  CHECK(split.instances[0].gold[1].aspect == "null");
  CHECK(split.name == "train");
}

TEST_CASE("escaped quotes inside single-quoted fields") {
  TempDir dir("legacy");
  const auto path = write_lines(
      dir, "t.txt",
      {"it does not work####[['screen', 'display quality', 'negative', "
       "'doesn\\'t work']]"});
  const DatasetSplit split = load_dataset(path, FileFormat::legacy);
  CHECK(split.instances[0].gold[0].opinion == "doesn't work");
}

TEST_CASE("blank or whitespace elements become the null literal") {
  TempDir dir("legacy");
  const auto path = write_lines(
      dir, "t.txt",
      {"ok food####[['', 'food quality', 'positive', '   ']]"});
  const DatasetSplit split = load_dataset(path, FileFormat::legacy);
  CHECK(split.instances[0].gold[0].aspect == kNullLiteral);
  CHECK(split.instances[0].gold[0].opinion == kNullLiteral);
}

TEST_CASE("missing delimiter raises an error naming line and text") {
  TempDir dir("legacy");
  const auto path = write_lines(dir, "t.txt",
                                {"fine####[['a', 'b c', 'positive', 'd']]",
                                 "no delimiter on this line"});
  try {
    load_dataset(path, FileFormat::legacy);
    FAIL("expected DatasetError");
  } catch (const DatasetError& e) {
    CHECK(e.line() == 2);
    const std::string what = e.what();
    CHECK(what.find("####") != std::string::npos);
    CHECK(what.find("no delimiter on this line") != std::string::npos);
    CHECK(what.find(":2:") != std::string::npos);
  }
}

TEST_CASE("wrong tuple arity raises an error with the line number") {
  TempDir dir("legacy");
  const auto path = write_lines(
      dir, "t.txt", {"bad line####[['a', 'b', 'positive']]"});
  try {
    load_dataset(path, FileFormat::legacy);
    FAIL("expected DatasetError");
  } catch (const DatasetError& e) {
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find("3 elements") != std::string::npos);
  }
}

TEST_CASE("malformed tuple list text is rejected, not evaluated") {
  TempDir dir("legacy");
  for (const char* payload :
       {"[['a', 'b', 'c', 'd'", "[['a' 'b', 'c', 'd']]", "not a list",
        "[['a', 'b', 'c', 'd']] trailing"}) {
    const auto path =
        write_lines(dir, "t.txt", {std::string("text####") + payload});
    CHECK_THROWS_AS(load_dataset(path, FileFormat::legacy), DatasetError);
  }
}

TEST_CASE("zero-tuple training instances are skipped with a warning") {
  TempDir dir("legacy");
  const auto path = write_lines(
      dir, "t.txt",
      {"has gold####[['a', 'b c', 'positive', 'd']]", "no gold####[]"});
  std::vector<std::string> warnings;
  const DatasetSplit split =
      load_dataset(path, FileFormat::legacy, &warnings);
  CHECK(split.size() == 1);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find(":2:") != std::string::npos);
  CHECK(warnings[0].find("no gold tuples") != std::string::npos);

  const DatasetSplit unlabeled =
      load_dataset(path, FileFormat::legacy, nullptr, false);
  CHECK(unlabeled.size() == 2);
  CHECK(unlabeled.instances[1].gold.empty());
}

TEST_CASE("duplicate canonical ids are rejected") {
  TempDir dir("canon");
  const auto path = write_lines(
      dir, "t.jsonl",
      {R"({"id":"x","sentence":"a b","tuples":[["a","b c","positive","d"]]})",
       R"({"id":"x","sentence":"c d","tuples":[["a","b c","positive","d"]]})"});
  try {
    load_dataset(path, FileFormat::canonical);
    FAIL("expected DatasetError");
  } catch (const DatasetError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("duplicate instance id x") !=
          std::string::npos);
  }
}

TEST_CASE("canonical records must carry id, sentence and tuples") {
  TempDir dir("canon");
  const auto path =
      write_lines(dir, "t.jsonl", {R"({"sentence":"a","tuples":[]})"});
  CHECK_THROWS_AS(load_dataset(path, FileFormat::canonical, nullptr, false),
                  DatasetError);
}

TEST_CASE("blank lines and CRLF endings are tolerated") {
  TempDir dir("legacy");
  const auto path = dir / "t.txt";
  {
    std::ofstream out(path, std::ios::binary);
    out << "great pizza####[['pizza', 'food quality', 'positive', "
           "'great']]\r\n";
    out << "\r\n";
    out << "   \n";
    out << "bad service####[['service', 'service general', 'negative', "
           "'bad']]\n";
  }
  const DatasetSplit split = load_dataset(path, FileFormat::legacy);
  CHECK(split.size() == 2);
  CHECK(split.instances[0].sentence == "great pizza");
}

TEST_CASE("missing file raises an error naming the path") {
  try {
    load_dataset("/nonexistent/nowhere.txt", FileFormat::legacy);
    FAIL("expected error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("nowhere.txt") != std::string::npos);
  }
}

TEST_CASE("fixture corpus round-trips through the canonical format") {
  const DatasetSplit loaded = load_dataset(
      testsupport::fixture_path("reviews_train.txt"), FileFormat::legacy);
  REQUIRE(loaded.size() == 10);

  TempDir dir("roundtrip");
  const auto canon = dir / "train.jsonl";
  write_dataset(loaded, canon);
  const DatasetSplit back = load_dataset(canon, FileFormat::canonical);
  REQUIRE(back.size() == loaded.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK(back.instances[i].id == loaded.instances[i].id);
    CHECK(back.instances[i].sentence == loaded.instances[i].sentence);
    CHECK(back.instances[i].gold == loaded.instances[i].gold);
  }

  // A second write is byte-identical.
  const auto canon2 = dir / "again.jsonl";
  write_dataset(back, canon2);
  std::ifstream a(canon), b(canon2);
  const std::string bytes_a((std::istreambuf_iterator<char>(a)), {});
  const std::string bytes_b((std::istreambuf_iterator<char>(b)), {});
  CHECK(bytes_a == bytes_b);
}

TEST_CASE("synthetic corpora round-trip exactly") {
  testsupport::Rng rng(23);
  DatasetSplit split;
  split.name = "train";
  for (int i = 0; i < 300; ++i) {
    split.instances.push_back(
        testsupport::random_instance(rng, "syn-" + std::to_string(i)));
  }
  TempDir dir("roundtrip");
  const auto path = dir / "syn.jsonl";
  write_dataset(split, path);
  const DatasetSplit back = load_dataset(path, FileFormat::canonical);
  REQUIRE(back.size() == split.size());
  for (std::size_t i = 0; i < split.size(); ++i) {
    CHECK(back.instances[i].id == split.instances[i].id);
    CHECK(back.instances[i].sentence == split.instances[i].sentence);
    CHECK(back.instances[i].gold == split.instances[i].gold);
  }
}

TEST_CASE("count distribution matches the worked example") {
  // Counts 1, 1, 2, 9: the 9 clips into the 7+ bucket.
  const DatasetSplit split = split_with_counts({1, 1, 2, 9});
  const CountDistribution dist = count_distribution(split);
  CHECK(dist.ratio(1) == doctest::Approx(0.5));
  CHECK(dist.ratio(2) == doctest::Approx(0.25));
  CHECK(dist.ratio(7) == doctest::Approx(0.25));
  CHECK(dist.ratio(3) == 0.0);
  CHECK(dist.ratios.size() == 3);
}

TEST_CASE("count distribution ratios always sum to one") {
  testsupport::Rng rng(31);
  for (int round = 0; round < 50; ++round) {
    std::vector<int> counts;
    const int n = 1 + rng.below(40);
    for (int i = 0; i < n; ++i) counts.push_back(1 + rng.below(10));
    const CountDistribution dist = count_distribution(split_with_counts(counts));
    double total = 0.0;
    for (const auto& [bucket, ratio] : dist.ratios) {
      CHECK(bucket >= 1);
      CHECK(bucket <= CountDistribution::kClipBucket);
      CHECK(ratio > 0.0);
      total += ratio;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("count distribution rejects an empty split") {
  CHECK_THROWS_AS(count_distribution(DatasetSplit{}), std::invalid_argument);
}

TEST_CASE("implicit slice keeps exactly the instances with null terms") {
  const DatasetSplit split = load_dataset(
      testsupport::fixture_path("reviews_train.txt"), FileFormat::legacy);
  const DatasetSplit implicit = implicit_slice(split);
  CHECK(implicit.size() == 4);
  for (const auto& instance : implicit.instances) {
    CHECK(has_implicit_terms(instance));
  }
  for (const auto& instance : split.instances) {
    const bool kept =
        std::any_of(implicit.instances.begin(), implicit.instances.end(),
                    [&](const Instance& x) { return x.id == instance.id; });
    CHECK(kept == has_implicit_terms(instance));
  }

  // Idempotent: slicing a slice changes nothing.
  const DatasetSplit again = implicit_slice(implicit);
  CHECK(again.size() == implicit.size());
}

TEST_CASE("has_implicit_terms looks only at aspect and opinion") {
  Instance instance;
  instance.gold.push_back({"pizza", "food quality", "positive", "great"});
  CHECK_FALSE(has_implicit_terms(instance));
  instance.gold.push_back({"null", "food quality", "positive", "great"});
  CHECK(has_implicit_terms(instance));
  instance.gold.clear();
  instance.gold.push_back({"pizza", "null", "null", "great"});
  CHECK_FALSE(has_implicit_terms(instance));
}

}  // TEST_SUITE
