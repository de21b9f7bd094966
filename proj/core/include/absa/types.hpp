#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace absa {

// Marker tokens delimiting tuple elements in generated text, plus the
// view separator. Enumerator order matches the lexicographic order of
// the surface strings ("[A]" < "[C]" < "[O]" < "[S]" < "[SSEP]").
enum class MarkerKind : std::uint8_t {
  aspect,
  category,
  opinion,
  sentiment,
  separator,
};

inline constexpr const char* kNullLiteral = "null";

std::string_view marker_surface(MarkerKind kind);
std::optional<MarkerKind> marker_from_surface(std::string_view text);
bool is_marker_surface(std::string_view text);

/// True if any marker surface string ("[A]" ... "[SSEP]") occurs as a
/// substring of `text`.
bool contains_marker_surface(std::string_view text);

// A set of element markers (no separator), size 3 or 4. Stage 1 uses
// {A,C,S} by default, stage 2 the full {A,C,S,O}; exclusion variants use
// the other 3-subsets.
class ElementSet {
 public:
  static ElementSet of(std::vector<MarkerKind> elements);
  static ElementSet acs();
  static ElementSet acso();

  /// The full set minus one element; throws if the result would have
  /// fewer than 3 members.
  ElementSet without(MarkerKind element) const;

  const std::vector<MarkerKind>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(MarkerKind element) const;

  /// Compact form for file records, e.g. "ACS", "ACSO", "AOS".
  std::string label() const;
  static ElementSet from_label(std::string_view label);

  auto operator<=>(const ElementSet&) const = default;

 private:
  explicit ElementSet(std::vector<MarkerKind> elements)
      : elements_(std::move(elements)) {}
  std::vector<MarkerKind> elements_;  // sorted, unique
};

// One (aspect, category, sentiment, opinion) quadruple. Implicit
// elements are stored as the literal "null"; fields are kept verbatim
// from the data, normalization happens at evaluation time.
struct SentimentTuple {
  std::string aspect;
  std::string category;
  std::string sentiment;
  std::string opinion;

  bool is_valid() const;
  const std::string& element(MarkerKind kind) const;
  std::string& element(MarkerKind kind);

  auto operator<=>(const SentimentTuple&) const = default;
};

/// Raw four-field equality, no normalization.
inline bool tuple_equals(const SentimentTuple& a, const SentimentTuple& b) {
  return a == b;
}

// One permutation of an element set; the order in which a single tuple's
// elements are generated.
class View {
 public:
  static View of(std::vector<MarkerKind> order);

  const std::vector<MarkerKind>& order() const { return order_; }
  ElementSet element_set() const;
  std::string render() const;  // e.g. "[S] [A] [O] [C]"

  auto operator<=>(const View&) const = default;

 private:
  explicit View(std::vector<MarkerKind> order) : order_(std::move(order)) {}
  std::vector<MarkerKind> order_;
};

// A non-empty sequence of views over one shared element set. Stage 1's
// generation target and stage 2's prompt. Duplicate views are legal here
// (model output may repeat them); the builders only repeat views once the
// permutation pool is exhausted.
class OrderTemplate {
 public:
  static OrderTemplate of(std::vector<View> views);

  const std::vector<View>& views() const { return views_; }
  std::size_t size() const { return views_.size(); }
  ElementSet element_set() const { return views_.front().element_set(); }

  auto operator<=>(const OrderTemplate&) const = default;

 private:
  explicit OrderTemplate(std::vector<View> views) : views_(std::move(views)) {}
  std::vector<View> views_;
};

// A review sentence with its gold tuples. Gold may be empty only for
// inference-time inputs; training instances must have at least one tuple.
struct Instance {
  std::string id;
  std::string sentence;
  std::vector<SentimentTuple> gold;
  std::string source;

  std::size_t tuple_count() const { return gold.size(); }
};

}  // namespace absa
