#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cogsim {

// Keywords that make an account, file or host name stand out to an attacker.
std::vector<std::string> default_salience_keywords();

// Lexical salience of `name` in [0,1]. 1.0 when some keyword is a
// case-insensitive substring; otherwise the best (1 - normalized edit
// distance) between any token of the name and any keyword, floored at 0.
// Tokens are maximal alphanumeric runs, compared lower-cased; the distance is
// normalized by the longer of the two strings.
// Throws Error{SalienceConfigEmpty} when `keywords` is empty.
double lexical_salience(std::string_view name, std::span<const std::string> keywords);

// Plain Levenshtein distance (unit costs).
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace cogsim
