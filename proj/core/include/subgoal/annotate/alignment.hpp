#pragma once

#include <string>
#include <vector>

#include "subgoal/annotate/types.hpp"

namespace subgoal::annotate {

// Minimal insert/delete script turning `generated` into `expert`, comparing
// actions as atomic tokens. A substitution costs 2 (remove + add). Among
// minimal scripts the one preferring keep, then remove, then add at every
// cell is returned, so the result is canonical.
EditScript edit_script(const std::vector<std::string>& generated,
                       const std::vector<std::string>& expert);

// Replays `script` on `generated` and returns the result.
std::vector<std::string> apply_script(const EditScript& script,
                                      const std::vector<std::string>& generated,
                                      const std::vector<std::string>& expert);

// Drops every removed action from its segment. `script` must be built over
// concatenate(segments). Segments left empty are dropped.
std::vector<SubGoalSegment> apply_removals(const std::vector<SubGoalSegment>& segments,
                                           const EditScript& script);

// Groups add ops with consecutive expert indices into gaps and locates each
// one relative to `aligned` (the output of apply_removals).
std::vector<Gap> gap_groups(const EditScript& script, const std::vector<SubGoalSegment>& aligned);

}  // namespace subgoal::annotate
