#include "absa/types.hpp"

#include <algorithm>
#include <array>

namespace absa {

namespace {

constexpr std::array<std::string_view, 5> kSurfaces = {
    "[A]", "[C]", "[O]", "[S]", "[SSEP]"};

constexpr std::array<char, 4> kLetters = {'A', 'C', 'O', 'S'};

}  // namespace

std::string_view marker_surface(MarkerKind kind) {
  return kSurfaces[static_cast<std::size_t>(kind)];
}

std::optional<MarkerKind> marker_from_surface(std::string_view text) {
  for (std::size_t i = 0; i < kSurfaces.size(); ++i) {
    if (kSurfaces[i] == text) return static_cast<MarkerKind>(i);
  }
  return std::nullopt;
}

bool is_marker_surface(std::string_view text) {
  return marker_from_surface(text).has_value();
}

bool contains_marker_surface(std::string_view text) {
  for (const auto surface : kSurfaces) {
    if (text.find(surface) != std::string_view::npos) return true;
  }
  return false;
}

ElementSet ElementSet::of(std::vector<MarkerKind> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()),
                 elements.end());
  if (elements.size() < 3 || elements.size() > 4) {
    throw std::invalid_argument(
        "element set must have 3 or 4 distinct members, got " +
        std::to_string(elements.size()));
  }
  for (const auto e : elements) {
    if (e == MarkerKind::separator) {
      throw std::invalid_argument("element set may not contain [SSEP]");
    }
  }
  return ElementSet(std::move(elements));
}

ElementSet ElementSet::acs() {
  return of({MarkerKind::aspect, MarkerKind::category, MarkerKind::sentiment});
}

ElementSet ElementSet::acso() {
  return of({MarkerKind::aspect, MarkerKind::category, MarkerKind::sentiment,
             MarkerKind::opinion});
}

ElementSet ElementSet::without(MarkerKind element) const {
  std::vector<MarkerKind> rest;
  for (const auto e : elements_) {
    if (e != element) rest.push_back(e);
  }
  return of(std::move(rest));
}

bool ElementSet::contains(MarkerKind element) const {
  return std::find(elements_.begin(), elements_.end(), element) !=
         elements_.end();
}

std::string ElementSet::label() const {
  std::string out;
  for (const auto e : elements_) {
    out.push_back(kLetters[static_cast<std::size_t>(e)]);
  }
  return out;
}

ElementSet ElementSet::from_label(std::string_view label) {
  std::vector<MarkerKind> elements;
  for (const char c : label) {
    const auto it = std::find(kLetters.begin(), kLetters.end(), c);
    if (it == kLetters.end()) {
      throw std::invalid_argument("bad element-set label: " +
                                  std::string(label));
    }
    elements.push_back(
        static_cast<MarkerKind>(std::distance(kLetters.begin(), it)));
  }
  return of(std::move(elements));
}

bool SentimentTuple::is_valid() const {
  for (const auto* field : {&aspect, &category, &sentiment, &opinion}) {
    if (field->empty()) return false;
    if (contains_marker_surface(*field)) return false;
  }
  return true;
}

const std::string& SentimentTuple::element(MarkerKind kind) const {
  switch (kind) {
    case MarkerKind::aspect:
      return aspect;
    case MarkerKind::category:
      return category;
    case MarkerKind::sentiment:
      return sentiment;
    case MarkerKind::opinion:
      return opinion;
    case MarkerKind::separator:
      break;
  }
  throw std::invalid_argument("[SSEP] does not name a tuple element");
}

std::string& SentimentTuple::element(MarkerKind kind) {
  return const_cast<std::string&>(
      static_cast<const SentimentTuple&>(*this).element(kind));
}

View View::of(std::vector<MarkerKind> order) {
  if (order.size() < 3 || order.size() > 4) {
    throw std::invalid_argument("view must order 3 or 4 elements, got " +
                                std::to_string(order.size()));
  }
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("view contains a repeated marker");
  }
  if (std::find(order.begin(), order.end(), MarkerKind::separator) !=
      order.end()) {
    throw std::invalid_argument("view may not contain [SSEP]");
  }
  return View(std::move(order));
}

ElementSet View::element_set() const { return ElementSet::of(order_); }

std::string View::render() const {
  std::string out;
  for (const auto kind : order_) {
    if (!out.empty()) out.push_back(' ');
    out += marker_surface(kind);
  }
  return out;
}

OrderTemplate OrderTemplate::of(std::vector<View> views) {
  if (views.empty()) {
    throw std::invalid_argument("order template must contain at least one view");
  }
  const auto elements = views.front().element_set();
  for (const auto& view : views) {
    if (view.element_set() != elements) {
      throw std::invalid_argument(
          "all views in a template must share one element set");
    }
  }
  return OrderTemplate(std::move(views));
}

}  // namespace absa
