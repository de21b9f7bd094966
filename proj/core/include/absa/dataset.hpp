#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "absa/types.hpp"

namespace absa {

struct DatasetSplit {
  std::string name;  // train / dev / test, or the file stem
  std::vector<Instance> instances;

  std::size_t size() const { return instances.size(); }
};

// Tuple-count histogram normalized to frequency ratios. Counts of 7 or
// more share one bucket.
struct CountDistribution {
  static constexpr int kClipBucket = 7;
  std::map<int, double> ratios;  // occupied buckets only, sums to 1

  double ratio(int bucket) const {
    const auto it = ratios.find(bucket);
    return it == ratios.end() ? 0.0 : it->second;
  }
};

// Load failure with the offending file position and raw text.
class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::filesystem::path& path, int line,
               const std::string& raw, const std::string& why);
  int line() const { return line_; }

 private:
  int line_;
};

enum class FileFormat {
  legacy,     // sentence####[['a', 'c', 's', 'o'], ...]
  canonical,  // one JSON object per line: {id, sentence, tuples}
};

/// Reads a split. Empty or whitespace-only elements become "null".
/// Training files reject zero-tuple instances; each reject is reported
/// through `warnings` when given. Pass require_gold=false for unlabeled
/// inference inputs.
DatasetSplit load_dataset(const std::filesystem::path& path, FileFormat format,
                          std::vector<std::string>* warnings = nullptr,
                          bool require_gold = true);

/// Canonical JSON-lines output; loading it back round-trips exactly.
void write_dataset(const DatasetSplit& split, const std::filesystem::path& path);

CountDistribution count_distribution(const DatasetSplit& split);

bool has_implicit_terms(const Instance& instance);

/// Instances where at least one gold tuple has an implicit ("null")
/// aspect or opinion.
DatasetSplit implicit_slice(const DatasetSplit& split);

}  // namespace absa
