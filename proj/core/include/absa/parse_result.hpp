#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace absa {

// Parse failure over model output. `segment` is the zero-based [SSEP]
// segment index, or -1 when the failure is not tied to one segment.
struct FormatError {
  int segment = -1;
  std::string message;

  std::string describe() const {
    if (segment < 0) return message;
    return "segment " + std::to_string(segment) + ": " + message;
  }
};

// Minimal value-or-error result for parsers that must be total over
// arbitrary model output.
template <typename T>
class Parsed {
 public:
  Parsed(T value) : state_(std::move(value)) {}            // NOLINT
  Parsed(FormatError error) : state_(std::move(error)) {}  // NOLINT

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    if (!ok()) throw std::runtime_error("Parsed: " + error().describe());
    return std::get<T>(state_);
  }
  T& value() {
    if (!ok()) throw std::runtime_error("Parsed: " + error().describe());
    return std::get<T>(state_);
  }
  const FormatError& error() const { return std::get<FormatError>(state_); }

 private:
  std::variant<T, FormatError> state_;
};

}  // namespace absa
