#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace subgoal {

// A function-call-style milestone such as `navigate_to(kitchen)`.
//
// Text that does not have the `name(args)` shape is kept as an opaque
// sub-goal whose surface is the raw text; the action generator consumes the
// surface either way.
struct SubGoal {
  std::string name;
  std::vector<std::string> args;
  bool opaque = false;

  static SubGoal make(std::string name, std::vector<std::string> args = {});
  static SubGoal opaque_text(std::string text);

  // Canonical `name(a, b)`; the raw text for opaque sub-goals.
  std::string surface() const;

  friend bool operator==(const SubGoal&, const SubGoal&) = default;
  friend auto operator<=>(const SubGoal& a, const SubGoal& b) {
    return a.surface() <=> b.surface();
  }
};

// Strict parse of `name(arg, ...)`. Unescapes `\_`, trims whitespace and
// preserves case. Returns nullopt if the text is not in call form.
std::optional<SubGoal> parse_subgoal(std::string_view text);

// Lenient parse used on model output: call form if possible, otherwise an
// opaque sub-goal. Empty text or the literal `none` yields nullopt.
std::optional<SubGoal> parse_subgoal_lenient(std::string_view text);

// Splits `a(x, y), b(z)` at top-level commas.
std::vector<std::string> split_top_level(std::string_view list);

}  // namespace subgoal
