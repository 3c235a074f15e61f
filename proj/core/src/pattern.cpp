#include "cogsim/pattern.hpp"

namespace cogsim {

bool pattern_matches(std::string_view pattern, std::string_view text) {
  // With no anchors, placing each literal segment at its leftmost possible
  // position is optimal, so a single forward scan decides the match.
  std::size_t pos = 0;
  std::size_t start = 0;
  while (start <= pattern.size()) {
    const std::size_t star = pattern.find('*', start);
    const std::size_t end = star == std::string_view::npos ? pattern.size() : star;
    const std::string_view segment = pattern.substr(start, end - start);
    if (!segment.empty()) {
      const std::size_t hit = text.find(segment, pos);
      if (hit == std::string_view::npos) return false;
      pos = hit + segment.size();
    }
    if (star == std::string_view::npos) break;
    start = star + 1;
  }
  return true;
}

bool any_pattern_matches(std::span<const std::string> patterns, std::string_view text) {
  for (const auto& p : patterns) {
    if (pattern_matches(p, text)) return true;
  }
  return false;
}

}  // namespace cogsim
