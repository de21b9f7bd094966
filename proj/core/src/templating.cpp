#include "absa/templating.hpp"

#include <algorithm>
#include <cctype>

namespace absa {

namespace {

struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // half-open byte range
  std::string_view text;
};

std::vector<TokenSpan> tokenize(std::string_view text) {
  std::vector<TokenSpan> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    tokens.push_back({i, j, text.substr(i, j - i)});
    i = j;
  }
  return tokens;
}

// Token-index ranges between [SSEP] atoms. N separators give N+1
// segments, so a trailing separator yields an empty final segment.
std::vector<std::pair<std::size_t, std::size_t>> split_segments(
    const std::vector<TokenSpan>& tokens) {
  std::vector<std::pair<std::size_t, std::size_t>> segments;
  std::size_t start = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (marker_from_surface(tokens[i].text) == MarkerKind::separator) {
      segments.emplace_back(start, i);
      start = i + 1;
    }
  }
  segments.emplace_back(start, tokens.size());
  return segments;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// Raw text between the end of token `after` and the start of token
// `until` (or `limit` when until is one past the segment), surrounding
// whitespace trimmed, internal spacing preserved.
std::string slice_between(std::string_view text,
                          const std::vector<TokenSpan>& tokens,
                          std::size_t after, std::size_t until,
                          std::size_t limit) {
  const std::size_t from = tokens[after].end;
  const std::size_t to = until < limit ? tokens[until].begin
                                       : (limit > 0 ? tokens[limit - 1].end
                                                    : from);
  if (to <= from) return {};
  return std::string(trim(text.substr(from, to - from)));
}

// Checks one segment against an expected marker order. Returns an empty
// string on success, otherwise the failure reason.
std::string check_segment_strict(const std::vector<TokenSpan>& tokens,
                                 std::size_t begin, std::size_t end,
                                 std::span<const MarkerKind> expected) {
  if (begin == end) return "empty segment";
  std::vector<MarkerKind> seen;
  for (std::size_t i = begin; i < end; ++i) {
    if (const auto kind = marker_from_surface(tokens[i].text)) {
      seen.push_back(*kind);
    } else if (seen.empty()) {
      return "text before first marker";
    }
  }
  if (seen.size() != expected.size() ||
      !std::equal(seen.begin(), seen.end(), expected.begin())) {
    std::string got;
    for (const auto k : seen) {
      if (!got.empty()) got.push_back(' ');
      got += marker_surface(k);
    }
    return "marker order mismatch (got \"" + got + "\")";
  }
  return {};
}

}  // namespace

std::vector<View> enumerate_views(const ElementSet& elements) {
  // Elements are stored sorted and enumerator order matches surface
  // order, so next_permutation walks the rendered strings in
  // lexicographic order directly.
  std::vector<View> views;
  std::vector<MarkerKind> order = elements.elements();
  do {
    views.push_back(View::of(order));
  } while (std::next_permutation(order.begin(), order.end()));
  return views;
}

std::string render_template(const OrderTemplate& tmpl) {
  std::string out;
  for (const auto& view : tmpl.views()) {
    if (!out.empty()) out += " [SSEP] ";
    out += view.render();
  }
  return out;
}

Parsed<TemplateParse> parse_template(std::string_view text,
                                     const ElementSet& elements,
                                     ParseMode mode) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) {
    return FormatError{-1, "empty template text"};
  }
  const auto segments = split_segments(tokens);

  TemplateParse out{OrderTemplate::of({View::of(elements.elements())}), {}};
  std::vector<View> views;
  for (std::size_t seg = 0; seg < segments.size(); ++seg) {
    const auto [begin, end] = segments[seg];
    std::vector<MarkerKind> order;
    std::string reason;
    if (begin == end) {
      reason = "empty segment";
    } else {
      for (std::size_t i = begin; i < end && reason.empty(); ++i) {
        const auto kind = marker_from_surface(tokens[i].text);
        if (!kind) {
          reason = "foreign token \"" + std::string(tokens[i].text) + "\"";
        } else if (!elements.contains(*kind)) {
          reason = "marker " + std::string(marker_surface(*kind)) +
                   " outside the element set";
        } else if (std::find(order.begin(), order.end(), *kind) !=
                   order.end()) {
          reason = "repeated marker " + std::string(marker_surface(*kind));
        } else {
          order.push_back(*kind);
        }
      }
      if (reason.empty() && order.size() != elements.size()) {
        reason = "incomplete view (" + std::to_string(order.size()) + " of " +
                 std::to_string(elements.size()) + " markers)";
      }
    }

    if (reason.empty()) {
      views.push_back(View::of(std::move(order)));
    } else if (mode == ParseMode::strict) {
      return FormatError{static_cast<int>(seg), reason};
    } else {
      out.dropped_segments.push_back(static_cast<int>(seg));
    }
  }

  if (views.empty()) {
    return FormatError{-1, "no valid view segment"};
  }
  out.result = OrderTemplate::of(std::move(views));
  return out;
}

Stage1Target build_stage1_target(const Instance& instance,
                                 std::span<const View> ranked) {
  const std::size_t k = instance.tuple_count();
  if (k == 0) {
    throw std::invalid_argument("instance " + instance.id +
                                " has no gold tuples");
  }
  if (ranked.empty()) {
    throw std::invalid_argument("ranked view list is empty");
  }
  std::vector<View> views;
  views.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    views.push_back(ranked[i % ranked.size()]);
  }
  return Stage1Target{render_template(OrderTemplate::of(std::move(views)))};
}

Stage2Pair build_stage2_pair(const Instance& instance,
                             std::span<const View> ranked) {
  const std::size_t k = instance.tuple_count();
  if (k == 0) {
    throw std::invalid_argument("instance " + instance.id +
                                " has no gold tuples");
  }
  if (ranked.empty()) {
    throw std::invalid_argument("ranked view list is empty");
  }

  Stage2Pair pair;
  pair.views.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    pair.views.push_back(ranked[i % ranked.size()]);
  }
  pair.input_text =
      instance.sentence + " " + render_template(OrderTemplate::of(pair.views));

  std::string target;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& tuple = instance.gold[i];
    if (!tuple.is_valid()) {
      throw std::invalid_argument("instance " + instance.id + " tuple " +
                                  std::to_string(i) +
                                  " has an empty field or embeds a marker");
    }
    if (!target.empty()) target += " [SSEP] ";
    for (const auto kind : pair.views[i].order()) {
      if (target.size() > 0 && target.back() != ' ') target.push_back(' ');
      target += marker_surface(kind);
      target.push_back(' ');
      target += tuple.element(kind);
    }
  }
  pair.target_text = std::move(target);
  return pair;
}

namespace {

// Marker-identity recovery for one segment: first occurrence of each
// element marker wins, its value runs to the next marker token of any
// kind. Returns false when the segment has no usable marker at all.
bool recover_segment(std::string_view text,
                     const std::vector<TokenSpan>& tokens, std::size_t begin,
                     std::size_t end, const ElementSet& elements,
                     SentimentTuple* tuple, bool* irregular) {
  std::vector<std::pair<std::size_t, MarkerKind>> markers;
  for (std::size_t i = begin; i < end; ++i) {
    if (const auto kind = marker_from_surface(tokens[i].text)) {
      markers.emplace_back(i, *kind);
    } else if (markers.empty()) {
      *irregular = true;  // stray text before the first marker
    }
  }

  tuple->aspect = kNullLiteral;
  tuple->category = kNullLiteral;
  tuple->sentiment = kNullLiteral;
  tuple->opinion = kNullLiteral;

  bool any = false;
  std::vector<MarkerKind> taken;
  for (std::size_t m = 0; m < markers.size(); ++m) {
    const auto [pos, kind] = markers[m];
    if (!elements.contains(kind)) {
      *irregular = true;
      continue;
    }
    if (std::find(taken.begin(), taken.end(), kind) != taken.end()) {
      *irregular = true;  // duplicate, first occurrence wins
      continue;
    }
    taken.push_back(kind);
    any = true;
    const std::size_t until =
        m + 1 < markers.size() ? markers[m + 1].first : end;
    const auto value = slice_between(text, tokens, pos, until, end);
    if (!value.empty() && !contains_marker_surface(value)) {
      tuple->element(kind) = value;
    }
  }
  return any;
}

}  // namespace

Parsed<TupleParse> parse_tuples(std::string_view text,
                                const OrderTemplate& tmpl, ParseMode mode) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) {
    if (mode == ParseMode::strict) return FormatError{-1, "empty target text"};
    return TupleParse{};
  }
  const auto segments = split_segments(tokens);
  const auto elements = tmpl.element_set();

  if (mode == ParseMode::strict && segments.size() != tmpl.size()) {
    const auto seg = std::min(segments.size(), tmpl.size());
    return FormatError{static_cast<int>(seg),
                       segments.size() > tmpl.size()
                           ? "no template view for segment"
                           : "missing segment for view"};
  }

  TupleParse out;
  for (std::size_t seg = 0; seg < segments.size(); ++seg) {
    const auto [begin, end] = segments[seg];
    bool irregular = seg >= tmpl.size();
    if (!irregular) {
      const auto reason = check_segment_strict(
          tokens, begin, end, tmpl.views()[seg].order());
      if (!reason.empty()) {
        if (mode == ParseMode::strict) {
          return FormatError{static_cast<int>(seg), reason};
        }
        irregular = true;
      }
    }

    SentimentTuple tuple;
    if (!irregular) {
      // Well-formed segment: read values straight off the expected order.
      const auto& order = tmpl.views()[seg].order();
      std::vector<std::size_t> positions;
      for (std::size_t i = begin; i < end; ++i) {
        if (marker_from_surface(tokens[i].text)) positions.push_back(i);
      }
      tuple.aspect = kNullLiteral;
      tuple.category = kNullLiteral;
      tuple.sentiment = kNullLiteral;
      tuple.opinion = kNullLiteral;
      for (std::size_t m = 0; m < order.size(); ++m) {
        const std::size_t until =
            m + 1 < positions.size() ? positions[m + 1] : end;
        const auto value =
            slice_between(text, tokens, positions[m], until, end);
        if (!value.empty()) tuple.element(order[m]) = value;
      }
      out.tuples.push_back(std::move(tuple));
    } else {
      bool stray = false;
      if (recover_segment(text, tokens, begin, end, elements, &tuple,
                          &stray)) {
        out.tuples.push_back(std::move(tuple));
        out.repaired_segments.push_back(static_cast<int>(seg));
      } else {
        out.dropped_segments.push_back(static_cast<int>(seg));
      }
    }
  }
  return out;
}

Parsed<TupleParse> parse_tuples_free(std::string_view text,
                                     const ElementSet& elements) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) return TupleParse{};
  const auto segments = split_segments(tokens);

  TupleParse out;
  for (std::size_t seg = 0; seg < segments.size(); ++seg) {
    const auto [begin, end] = segments[seg];
    SentimentTuple tuple;
    bool irregular = false;
    if (recover_segment(text, tokens, begin, end, elements, &tuple,
                        &irregular)) {
      out.tuples.push_back(std::move(tuple));
      if (irregular) out.repaired_segments.push_back(static_cast<int>(seg));
    } else {
      out.dropped_segments.push_back(static_cast<int>(seg));
    }
  }
  return out;
}

}  // namespace absa
