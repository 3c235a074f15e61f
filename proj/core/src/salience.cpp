#include "cogsim/salience.hpp"

#include <algorithm>
#include <cctype>

#include "cogsim/error.hpp"

namespace cogsim {

std::vector<std::string> default_salience_keywords() { return {"admin", "root", "master"}; }

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0u : 1u)});
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += c;
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

double lexical_salience(std::string_view name, std::span<const std::string> keywords) {
  if (keywords.empty()) throw Error(ErrorCode::SalienceConfigEmpty, "no salience keywords");
  const std::string lname = lower(name);
  for (const auto& k : keywords) {
    if (!k.empty() && lname.find(lower(k)) != std::string::npos) return 1.0;
  }
  double best = 0.0;
  for (const auto& tok : tokens(lname)) {
    for (const auto& k : keywords) {
      const std::string lk = lower(k);
      const std::size_t longest = std::max(tok.size(), lk.size());
      if (longest == 0) continue;
      const double sim =
          1.0 - static_cast<double>(edit_distance(tok, lk)) / static_cast<double>(longest);
      best = std::max(best, sim);
    }
  }
  return std::max(0.0, best);
}

}  // namespace cogsim
