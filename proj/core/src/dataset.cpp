#include "absa/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace absa {

namespace {

constexpr const char* kLegacyDelimiter = "####";

std::string trim_copy(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string null_if_blank(std::string s) {
  s = trim_copy(s);
  return s.empty() ? std::string(kNullLiteral) : s;
}

// Parser for the bracketed tuple lists of the public line format:
// [['pizza', 'food quality', 'positive', 'great'], ["don't", ...]].
// Quoted strings may use either quote style with backslash escapes. The
// source text is data, never evaluated.
class TupleListParser {
 public:
  explicit TupleListParser(const std::string& text) : text_(text) {}

  std::vector<std::vector<std::string>> parse() {
    skip_space();
    expect('[');
    std::vector<std::vector<std::string>> tuples;
    skip_space();
    if (peek() == ']') {
      ++pos_;
    } else {
      while (true) {
        tuples.push_back(parse_tuple());
        skip_space();
        if (peek() == ',') {
          ++pos_;
          skip_space();
          continue;
        }
        expect(']');
        break;
      }
    }
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters after tuple list");
    return tuples;
  }

 private:
  std::vector<std::string> parse_tuple() {
    expect('[');
    std::vector<std::string> fields;
    skip_space();
    if (peek() == ']') {
      ++pos_;
      return fields;
    }
    while (true) {
      fields.push_back(parse_string());
      skip_space();
      if (peek() == ',') {
        ++pos_;
        skip_space();
        continue;
      }
      expect(']');
      break;
    }
    return fields;
  }

  std::string parse_string() {
    const char quote = peek();
    if (quote != '\'' && quote != '"') fail("expected a quoted string");
    ++pos_;
    std::string out;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("dangling escape");
        const char esc = text_[pos_++];
        switch (esc) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          default: out.push_back(esc); break;
        }
      } else if (c == quote) {
        return out;
      } else {
        out.push_back(c);
      }
    }
    fail("unterminated string");
    return out;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& why) {
    throw std::runtime_error(why + " at offset " + std::to_string(pos_));
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

SentimentTuple tuple_from_fields(const std::vector<std::string>& fields) {
  if (fields.size() != 4) {
    throw std::runtime_error("tuple has " + std::to_string(fields.size()) +
                             " elements, expected 4");
  }
  return SentimentTuple{null_if_blank(fields[0]), null_if_blank(fields[1]),
                        null_if_blank(fields[2]), null_if_blank(fields[3])};
}

Instance parse_legacy_line(const std::string& line, const std::string& stem,
                           int line_no) {
  const auto delim = line.find(kLegacyDelimiter);
  if (delim == std::string::npos) {
    throw std::runtime_error("missing \"####\" delimiter");
  }
  Instance instance;
  char id[32];
  std::snprintf(id, sizeof(id), "-%05d", line_no);
  instance.id = stem + id;
  instance.sentence = trim_copy(line.substr(0, delim));
  instance.source = stem;
  const auto list_text = line.substr(delim + std::strlen(kLegacyDelimiter));
  for (const auto& fields : TupleListParser(list_text).parse()) {
    instance.gold.push_back(tuple_from_fields(fields));
  }
  return instance;
}

Instance parse_canonical_line(const std::string& line,
                              const std::string& stem) {
  const auto record = nlohmann::json::parse(line);
  if (!record.is_object() || !record.contains("id") ||
      !record.contains("sentence") || !record.contains("tuples")) {
    throw std::runtime_error("record must have id, sentence and tuples");
  }
  Instance instance;
  instance.id = record.at("id").get<std::string>();
  instance.sentence = record.at("sentence").get<std::string>();
  instance.source = stem;
  for (const auto& entry : record.at("tuples")) {
    instance.gold.push_back(
        tuple_from_fields(entry.get<std::vector<std::string>>()));
  }
  return instance;
}

std::string split_name_for(const std::string& stem) {
  for (const char* name : {"train", "dev", "test"}) {
    if (stem == name || stem.rfind(std::string(name) + "_", 0) == 0 ||
        (stem.size() > std::strlen(name) &&
         stem.compare(stem.size() - std::strlen(name), std::strlen(name),
                      name) == 0)) {
      return name;
    }
  }
  return stem;
}

}  // namespace

DatasetError::DatasetError(const std::filesystem::path& path, int line,
                           const std::string& raw, const std::string& why)
    : std::runtime_error(path.string() + ":" + std::to_string(line) + ": " +
                         why + " | " + raw),
      line_(line) {}

DatasetSplit load_dataset(const std::filesystem::path& path, FileFormat format,
                          std::vector<std::string>* warnings,
                          bool require_gold) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file: " + path.string());
  }
  const std::string stem = path.stem().string();

  DatasetSplit split;
  split.name = split_name_for(stem);

  std::unordered_set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim_copy(line).empty()) continue;
    Instance instance;
    try {
      instance = format == FileFormat::legacy
                     ? parse_legacy_line(line, stem, line_no)
                     : parse_canonical_line(line, stem);
    } catch (const std::exception& e) {
      throw DatasetError(path, line_no, line, e.what());
    }
    if (instance.gold.empty() && require_gold) {
      if (warnings) {
        warnings->push_back(path.string() + ":" + std::to_string(line_no) +
                            ": instance " + instance.id +
                            " has no gold tuples, skipped");
      }
      continue;
    }
    if (!seen_ids.insert(instance.id).second) {
      throw DatasetError(path, line_no, line,
                         "duplicate instance id " + instance.id);
    }
    split.instances.push_back(std::move(instance));
  }
  return split;
}

void write_dataset(const DatasetSplit& split,
                   const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open file for writing: " + path.string());
  }
  for (const auto& instance : split.instances) {
    nlohmann::ordered_json record;
    record["id"] = instance.id;
    record["sentence"] = instance.sentence;
    auto tuples = nlohmann::ordered_json::array();
    for (const auto& t : instance.gold) {
      tuples.push_back({t.aspect, t.category, t.sentiment, t.opinion});
    }
    record["tuples"] = std::move(tuples);
    out << record.dump() << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

CountDistribution count_distribution(const DatasetSplit& split) {
  if (split.instances.empty()) {
    throw std::invalid_argument("count_distribution over an empty split");
  }
  std::map<int, std::size_t> counts;
  for (const auto& instance : split.instances) {
    const int bucket =
        std::min<int>(static_cast<int>(instance.tuple_count()),
                      CountDistribution::kClipBucket);
    ++counts[bucket];
  }
  CountDistribution dist;
  for (const auto& [bucket, n] : counts) {
    dist.ratios[bucket] =
        static_cast<double>(n) / static_cast<double>(split.size());
  }
  return dist;
}

bool has_implicit_terms(const Instance& instance) {
  return std::any_of(instance.gold.begin(), instance.gold.end(),
                     [](const SentimentTuple& t) {
                       return t.aspect == kNullLiteral ||
                              t.opinion == kNullLiteral;
                     });
}

DatasetSplit implicit_slice(const DatasetSplit& split) {
  DatasetSplit out;
  out.name = split.name;
  std::copy_if(split.instances.begin(), split.instances.end(),
               std::back_inserter(out.instances), has_implicit_terms);
  return out;
}

}  // namespace absa
