#pragma once

#include <span>
#include <string>
#include <string_view>

namespace cogsim {

// Unanchored literal matching with `*` as the only metacharacter: the pattern
// matches when some substring of `text` fits it, `*` standing for any run of
// characters. "su *-adm*" matches "su backup-adm", "*jndi*" matches any text
// containing "jndi". Matching is case sensitive.
bool pattern_matches(std::string_view pattern, std::string_view text);

bool any_pattern_matches(std::span<const std::string> patterns, std::string_view text);

}  // namespace cogsim
