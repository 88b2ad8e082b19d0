#include "subgoal/common/subgoal.hpp"

#include <cctype>

#include "subgoal/common/text.hpp"

namespace subgoal {

SubGoal SubGoal::make(std::string name, std::vector<std::string> args) {
  return SubGoal{std::move(name), std::move(args), false};
}

SubGoal SubGoal::opaque_text(std::string text) {
  return SubGoal{std::move(text), {}, true};
}

std::string SubGoal::surface() const {
  if (opaque) return name;
  return name + "(" + join(args, ", ") + ")";
}

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string strip_quotes(std::string s) {
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

}  // namespace

std::optional<SubGoal> parse_subgoal(std::string_view text) {
  std::string t = replace_all(trim(text), "\\_", "_");
  auto open = t.find('(');
  if (open == std::string::npos || t.empty() || t.back() != ')') return std::nullopt;
  std::string name = trim(std::string_view(t).substr(0, open));
  if (name.empty()) return std::nullopt;
  for (char c : name) {
    if (!is_name_char(c)) return std::nullopt;
  }
  std::string inner = t.substr(open + 1, t.size() - open - 2);
  if (inner.find('(') != std::string::npos || inner.find(')') != std::string::npos) {
    return std::nullopt;
  }
  std::vector<std::string> args;
  if (!trim(inner).empty()) {
    for (auto& part : split(inner, ",")) {
      std::string a = strip_quotes(trim(part));
      if (a.empty()) return std::nullopt;
      args.push_back(std::move(a));
    }
  }
  return SubGoal::make(std::move(name), std::move(args));
}

std::optional<SubGoal> parse_subgoal_lenient(std::string_view text) {
  std::string t = trim(text);
  if (t.empty() || t == "none") return std::nullopt;
  if (auto sg = parse_subgoal(t)) return sg;
  return SubGoal::opaque_text(t);
}

std::vector<std::string> split_top_level(std::string_view list) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (std::size_t i = 0; i < list.size(); ++i) {
    char c = list[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

}  // namespace subgoal
