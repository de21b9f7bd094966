#pragma once

// Shared helpers for the test binaries: a deterministic rng wrapper,
// synthetic corpus generators, and scoped temp directories.

#include <unistd.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "absa/types.hpp"

namespace testsupport {

// Modulo draws instead of uniform_int_distribution so sequences are
// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
  bool chance(int one_in) { return below(one_in) == 0; }

  template <typename T>
  const T& pick(const std::vector<T>& options) {
    return options[static_cast<std::size_t>(below(static_cast<int>(options.size())))];
  }

 private:
  std::mt19937_64 engine_;
};

inline std::string random_word(Rng& rng) {
  const int length = 3 + rng.below(6);
  std::string word;
  for (int i = 0; i < length; ++i) word.push_back(static_cast<char>('a' + rng.below(26)));
  return word;
}

// Space-joined words; optionally "null" to exercise implicit elements.
inline std::string random_span(Rng& rng, int max_words, bool allow_null) {
  if (allow_null && rng.chance(4)) return absa::kNullLiteral;
  const int words = 1 + rng.below(max_words);
  std::string span;
  for (int i = 0; i < words; ++i) {
    if (i > 0) span.push_back(' ');
    span += random_word(rng);
  }
  return span;
}

inline absa::SentimentTuple random_tuple(Rng& rng) {
  static const std::vector<std::string> polarities = {"positive", "negative",
                                                      "neutral"};
  absa::SentimentTuple t;
  t.aspect = random_span(rng, 3, true);
  t.category = random_word(rng) + " " + random_word(rng);
  t.sentiment = rng.pick(polarities);
  t.opinion = random_span(rng, 3, true);
  return t;
}

inline absa::Instance random_instance(Rng& rng, std::string id,
                                      int max_tuples = 4) {
  absa::Instance instance;
  instance.id = std::move(id);
  instance.sentence = random_span(rng, 12, false);
  const int tuples = 1 + rng.below(max_tuples);
  for (int i = 0; i < tuples; ++i) instance.gold.push_back(random_tuple(rng));
  return instance;
}

// Arbitrary-looking but marker-free text: mixed case, stop words,
// punctuation, and uneven spacing. Used by normalization properties.
inline std::string random_messy_text(Rng& rng) {
  static const std::vector<std::string> stopish = {"the", "not", "of", "a",
                                                   "is",  "was", "but"};
  const int words = 1 + rng.below(6);
  std::string text;
  for (int i = 0; i < words; ++i) {
    if (i > 0) text.append(rng.chance(5) ? "  " : " ");
    std::string word = rng.chance(3) ? rng.pick(stopish) : random_word(rng);
    if (rng.chance(4)) word[0] = static_cast<char>(word[0] - 'a' + 'A');
    if (rng.chance(6)) word.push_back(rng.chance(2) ? '!' : ',');
    text += word;
  }
  return text;
}

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(ABSA_FIXTURE_DIR) / name;
}

// Unique directory under the system temp root, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& hint) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("absa-" + hint + "-" + std::to_string(counter.fetch_add(1)) +
             "-" + std::to_string(::getpid()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testsupport
