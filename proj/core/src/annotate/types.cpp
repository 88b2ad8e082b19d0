#include "subgoal/annotate/types.hpp"

#include "subgoal/common/errors.hpp"

namespace subgoal::annotate {

std::vector<std::string> concatenate(const std::vector<SubGoalSegment>& segments) {
  std::vector<std::string> out;
  for (const auto& s : segments) out.insert(out.end(), s.actions.begin(), s.actions.end());
  return out;
}

std::vector<SubGoalSegment> gold_segments(const std::vector<world::ExpertStep>& expert) {
  std::vector<SubGoalSegment> out;
  for (std::size_t i = 0; i < expert.size(); ++i) {
    if (i == 0 || expert[i].segment != expert[i - 1].segment) out.push_back({expert[i].subgoal, {}});
    out.back().actions.push_back(expert[i].action.surface);
  }
  return out;
}

std::vector<std::string> action_surfaces(const std::vector<world::ExpertStep>& expert) {
  std::vector<std::string> out;
  out.reserve(expert.size());
  for (const auto& s : expert) out.push_back(s.action.surface);
  return out;
}

std::string_view to_string(Role r) { return r == Role::action ? "action" : "subgoal"; }

Role role_from_string(std::string_view s) {
  if (s == "action") return Role::action;
  if (s == "subgoal") return Role::subgoal;
  throw ConfigError("unknown role '" + std::string(s) + "' (expected action|subgoal)");
}

}  // namespace subgoal::annotate
