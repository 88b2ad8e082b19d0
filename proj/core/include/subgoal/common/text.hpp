#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "subgoal/common/errors.hpp"

namespace subgoal {

inline constexpr std::size_t kDefaultMaxTokens = 1024;

// Whitespace-delimited token count.
std::size_t count_tokens(std::string_view text);

// A string bounded to at most `max_tokens` whitespace tokens.
class TextN {
 public:
  TextN() = default;
  explicit TextN(std::string value, std::size_t max_tokens = kDefaultMaxTokens);

  const std::string& str() const noexcept { return value_; }
  std::size_t max_tokens() const noexcept { return max_tokens_; }
  bool empty() const noexcept { return value_.empty(); }

  friend bool operator==(const TextN& a, const TextN& b) { return a.value_ == b.value_; }

 private:
  std::string value_;
  std::size_t max_tokens_ = kDefaultMaxTokens;
};

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, std::string_view delim);
std::string join(const std::vector<std::string>& parts, std::string_view delim);
bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);
std::string replace_all(std::string s, std::string_view from, std::string_view to);

// Character-level Levenshtein distance with unit costs (substitution = 1).
std::size_t char_levenshtein(std::string_view a, std::string_view b);

// "a"/"an" by leading vowel.
std::string indefinite_article(std::string_view noun);

// Replaces every `${key}` in `tmpl` with params[key]. Throws ConfigError on
// a missing key.
template <typename Map>
std::string substitute(std::string_view tmpl, const Map& params) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '$' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
      auto close = tmpl.find('}', i + 2);
      if (close == std::string_view::npos) {
        throw ConfigError("unterminated ${...} in '" + std::string(tmpl) + "'");
      }
      std::string key(tmpl.substr(i + 2, close - i - 2));
      auto it = params.find(key);
      if (it == params.end()) {
        throw ConfigError("unknown template parameter '" + key + "' in '" +
                          std::string(tmpl) + "'");
      }
      out += it->second;
      i = close + 1;
    } else {
      out += tmpl[i++];
    }
  }
  return out;
}

}  // namespace subgoal
