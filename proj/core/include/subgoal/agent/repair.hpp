#pragma once

#include <string_view>
#include <vector>

#include "subgoal/world/types.hpp"

namespace subgoal::agent {

// Maps free text onto an admissible command: an exact match after trimming
// and lowercasing, else the command at the smallest character edit
// distance (ties go to the lexicographically smallest surface). Throws
// PreconditionError when `admissible` is empty.
world::Action repair_action(std::string_view raw, const std::vector<world::Action>& admissible);

}  // namespace subgoal::agent
