#include "subgoal/agent/context.hpp"

#include "subgoal/annotate/records.hpp"

namespace subgoal::agent {

void AgentContext::observe(const world::EnvState& state) {
  step = state.step_count;
  cumulative_score = state.cumulative_score;
  room_text = world::render_room(state);
  inventory_text = world::render_inventory(state);
  visited_text = world::render_visited(state);
}

void AgentContext::record(annotate::HistoryEntry entry) {
  history.push_back(std::move(entry));
  while (history.size() > annotate::kHistoryWindow) history.pop_front();
}

bool AgentContext::adopt(std::optional<SubGoal> next) {
  if (next == current_subgoal) return false;
  if (current_subgoal && (completed_subgoals.empty() || completed_subgoals.back() != *current_subgoal)) {
    completed_subgoals.push_back(*current_subgoal);
  }
  current_subgoal = std::move(next);
  return true;
}

annotate::PromptContext to_prompt_context(const AgentContext& ctx) {
  annotate::PromptContext p;
  p.task_desc = annotate::task_desc_of(ctx.goal.text.str());
  p.time = ctx.step;
  p.score = ctx.cumulative_score;
  p.completed = ctx.completed_subgoals;
  p.current = ctx.current_subgoal;
  p.history.assign(ctx.history.begin(), ctx.history.end());
  p.room_text = ctx.room_text;
  p.inventory_text = ctx.inventory_text;
  p.visited_text = ctx.visited_text;
  return p;
}

std::string build_subgoal_prompt(const AgentContext& ctx) {
  return annotate::render_input(to_prompt_context(ctx), annotate::Role::subgoal);
}

std::string build_action_prompt(const AgentContext& ctx) {
  return annotate::render_input(to_prompt_context(ctx), annotate::Role::action);
}

}  // namespace subgoal::agent
