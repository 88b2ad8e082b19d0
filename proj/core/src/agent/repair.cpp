#include "subgoal/agent/repair.hpp"

#include <limits>

#include "subgoal/common/errors.hpp"
#include "subgoal/common/text.hpp"

namespace subgoal::agent {

world::Action repair_action(std::string_view raw, const std::vector<world::Action>& admissible) {
  if (admissible.empty()) throw PreconditionError("repair_action needs at least one admissible command");
  const std::string needle = to_lower(trim(raw));
  for (const auto& a : admissible) {
    if (a.surface == needle) return a;
  }
  const world::Action* best = nullptr;
  std::size_t best_distance = std::numeric_limits<std::size_t>::max();
  for (const auto& a : admissible) {
    std::size_t d = char_levenshtein(needle, a.surface);
    if (d < best_distance || (d == best_distance && a.surface < best->surface)) {
      best = &a;
      best_distance = d;
    }
  }
  return *best;
}

}  // namespace subgoal::agent
