#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "subgoal/annotate/types.hpp"
#include "subgoal/world/engine.hpp"

namespace subgoal::agent {

// What the agent knows at one step. The history deque never exceeds
// annotate::kHistoryWindow entries and the completed list never holds two
// equal sub-goals in a row.
struct AgentContext {
  world::GoalDescription goal;
  int step = 0;
  int cumulative_score = 0;
  std::vector<SubGoal> completed_subgoals;
  std::optional<SubGoal> current_subgoal;
  std::deque<annotate::HistoryEntry> history;
  std::string room_text;
  std::string inventory_text;
  std::string visited_text;

  // Refreshes the three observation panels from an environment state.
  void observe(const world::EnvState& state);
  void record(annotate::HistoryEntry entry);
  // Moves the current sub-goal to the completed list when `next` differs.
  // Returns true when the sub-goal changed.
  bool adopt(std::optional<SubGoal> next);
};

annotate::PromptContext to_prompt_context(const AgentContext& ctx);

std::string build_subgoal_prompt(const AgentContext& ctx);
std::string build_action_prompt(const AgentContext& ctx);

}  // namespace subgoal::agent
