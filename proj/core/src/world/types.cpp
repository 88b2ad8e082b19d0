#include "subgoal/world/types.hpp"

#include <algorithm>
#include <set>

#include "subgoal/common/errors.hpp"

namespace subgoal::world {

const std::vector<ActionTemplate>& action_templates() {
  static const std::vector<ActionTemplate> registry = {
      {Verb::look_around, "look around", 0},
      {Verb::wait, "wait", 0},
      {Verb::inventory, "inventory", 0},
      {Verb::task, "task", 0},
      {Verb::go_to, "go to LOC", 1},
      {Verb::open_door, "open door to LOC", 1},
      {Verb::close_door, "close door to LOC", 1},
      {Verb::open, "open OBJ", 1},
      {Verb::close, "close OBJ", 1},
      {Verb::activate, "activate OBJ", 1},
      {Verb::deactivate, "deactivate OBJ", 1},
      {Verb::pick_up, "pick up OBJ", 1},
      {Verb::put_down, "put down OBJ", 1},
      {Verb::move, "move OBJ to OBJ", 2},
      {Verb::pour, "pour OBJ into OBJ", 2},
      {Verb::focus_on, "focus on OBJ", 1},
      {Verb::look_at, "look at OBJ", 1},
      {Verb::read, "read OBJ", 1},
      {Verb::use, "use OBJ on OBJ", 2},
  };
  return registry;
}

std::string render_action(Verb verb, const std::vector<std::string>& args) {
  for (const auto& t : action_templates()) {
    if (t.verb != verb) continue;
    if (static_cast<int>(args.size()) != t.arity) {
      throw RangeError("action template '" + std::string(t.pattern) + "' takes " +
                       std::to_string(t.arity) + " argument(s)");
    }
    std::string out;
    std::size_t next = 0;
    for (const auto& word : split(t.pattern, " ")) {
      if (!out.empty()) out += ' ';
      out += (word == "OBJ" || word == "LOC") ? args[next++] : word;
    }
    return out;
  }
  throw RangeError("unknown verb");
}

Action make_action(Verb verb, std::vector<std::string> args) {
  Action a;
  a.verb = verb;
  a.surface = render_action(verb, args);
  a.args = std::move(args);
  return a;
}

std::string_view to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::none: return "none";
    case TerminationReason::task_complete: return "task_complete";
    case TerminationReason::wrong_focus: return "wrong_focus";
    case TerminationReason::step_limit: return "step_limit";
    case TerminationReason::stall_limit: return "stall_limit";
    case TerminationReason::policy_error: return "policy_error";
  }
  return "none";
}

TerminationReason termination_from_string(std::string_view s) {
  for (auto r : {TerminationReason::none, TerminationReason::task_complete,
                 TerminationReason::wrong_focus, TerminationReason::step_limit,
                 TerminationReason::stall_limit, TerminationReason::policy_error}) {
    if (to_string(r) == s) return r;
  }
  throw ParseError("unknown termination reason '" + std::string(s) + "'");
}

DoorKey door_key(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

const TaskSpec& TaskSuite::task(std::string_view task_type_id) const {
  for (const auto& t : tasks) {
    if (t.task_type_id == task_type_id) return t;
  }
  throw ConfigError("unknown task type '" + std::string(task_type_id) + "'");
}

std::vector<std::string> TaskSuite::task_type_ids() const {
  std::vector<std::string> out;
  for (const auto& t : tasks) out.push_back(t.task_type_id);
  return out;
}

std::vector<std::string> TaskSuite::themes() const {
  std::set<std::string> s;
  for (const auto& t : tasks) s.insert(t.theme);
  return {s.begin(), s.end()};
}

std::string_view to_string(SplitName s) {
  switch (s) {
    case SplitName::train: return "train";
    case SplitName::dev: return "dev";
    case SplitName::test: return "test";
  }
  return "train";
}

SplitName split_from_string(std::string_view s) {
  if (s == "train") return SplitName::train;
  if (s == "dev") return SplitName::dev;
  if (s == "test") return SplitName::test;
  throw ConfigError("unknown split '" + std::string(s) + "' (expected train|dev|test)");
}

}  // namespace subgoal::world
