#pragma once

#include <string_view>

#include "subgoal/world/types.hpp"

namespace subgoal::world {

// Milestone predicate DSL:
//   at(location) | holding(object) | in(object, container) | focused(object)
//   | state(object, value) | p & q & ...
Predicate parse_predicate(std::string_view text);

bool evaluate(const Predicate& p, const EnvState& state);

// True if `object` is nested (at any depth) inside `container`.
bool is_inside(const EnvState& state, std::string_view object, std::string_view container);

// True if the object is in the inventory, possibly inside a carried container.
bool is_held(const EnvState& state, std::string_view object);

// Growth stage names in order; state(x, stage) holds once x reached it.
const std::vector<std::string>& growth_stages();

std::string phase_of(const ObjectState& obj);

}  // namespace subgoal::world
