#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subgoal/common/subgoal.hpp"
#include "subgoal/common/text.hpp"

namespace subgoal::world {

enum class Verb {
  look_around,
  wait,
  inventory,
  task,
  go_to,
  open_door,
  close_door,
  open,
  close,
  activate,
  deactivate,
  pick_up,
  put_down,
  move,
  pour,
  focus_on,
  look_at,
  read,
  use,
};

struct ActionTemplate {
  Verb verb;
  std::string_view pattern;  // OBJ / LOC mark the slots
  int arity;
};

// The template registry, in a fixed order.
const std::vector<ActionTemplate>& action_templates();

struct Action {
  Verb verb = Verb::wait;
  std::vector<std::string> args;
  std::string surface;

  friend bool operator==(const Action&, const Action&) = default;
};

std::string render_action(Verb verb, const std::vector<std::string>& args);
Action make_action(Verb verb, std::vector<std::string> args = {});

enum class TerminationReason { none, task_complete, wrong_focus, step_limit, stall_limit, policy_error };

std::string_view to_string(TerminationReason r);
TerminationReason termination_from_string(std::string_view s);

struct Observation {
  TextN text;
  int score_after = 0;
  int score_delta = 0;
  bool done = false;
  TerminationReason termination_reason = TerminationReason::none;
};

struct GoalDescription {
  std::string task_type_id;
  int variation_id = 0;
  TextN text;

  friend bool operator==(const GoalDescription&, const GoalDescription&) = default;
};

// Authored object. `location` names a room or a containing object.
struct ObjectSpec {
  std::string name;
  std::string location;
  std::string article;  // empty: derived from the name
  bool portable = true;
  bool container = false;
  bool openable = false;
  bool open = true;
  bool device = false;     // has an on/off switch
  bool active = false;
  bool always_on = false;  // heats/cools without a switch
  int heat_rate = 0;       // temperature change per tick applied to contents
  bool substance = false;
  bool living = false;
  int temperature = 20;
  std::optional<int> melting_point;
  std::optional<int> boiling_point;
  bool thermometer = false;
  std::string readable_text;
  std::string pour_tag;  // pouring this object tags the target with pour_tag
  int growth_ticks = 0;  // >0: grows one stage every growth_ticks ticks in watered soil
  std::vector<std::string> tags;
};

enum class Holder { room, object, inventory };

struct ObjectState {
  ObjectSpec spec;
  Holder holder = Holder::room;
  std::string parent;  // room name or containing object name
  std::vector<std::string> contents;
  int temperature = 20;
  int growth = 0;
  std::vector<std::string> tags;  // sorted
  bool open = true;
  bool active = false;

  friend bool operator==(const ObjectState& a, const ObjectState& b) {
    return a.spec.name == b.spec.name && a.holder == b.holder && a.parent == b.parent &&
           a.contents == b.contents && a.temperature == b.temperature &&
           a.growth == b.growth && a.tags == b.tags && a.open == b.open &&
           a.active == b.active;
  }
};

using DoorKey = std::pair<std::string, std::string>;  // sorted pair of locations

DoorKey door_key(std::string a, std::string b);

struct EnvState {
  std::string task_type_id;
  int variation_id = 0;
  std::uint64_t rng_seed = 0;
  std::map<std::string, std::vector<std::string>> rooms;  // top-level contents, insertion order
  std::map<std::string, ObjectState> objects;
  std::map<DoorKey, bool> doors;  // true = open
  std::string agent_location;
  std::vector<std::string> inventory;
  std::vector<std::string> visited_rooms;
  std::vector<bool> milestones_hit;
  std::vector<std::string> focused;
  int cumulative_score = 0;
  int step_count = 0;
  bool done = false;
  TerminationReason termination = TerminationReason::none;

  friend bool operator==(const EnvState&, const EnvState&) = default;
};

struct Predicate {
  enum class Kind { at, holding, in, focused, state, all };
  Kind kind = Kind::all;
  std::vector<std::string> args;
  std::vector<Predicate> terms;  // for Kind::all
};

struct Milestone {
  Predicate predicate;
  std::string predicate_text;
  int points = 0;
  SubGoal subgoal;
  std::vector<std::string> actions;  // explicit expert actions; empty = derived from subgoal
  bool then_wait = false;            // wait until the predicate holds
};

struct MilestoneTemplate {
  std::string predicate;
  int points = 0;
  std::string subgoal;
  std::vector<std::string> actions;
  bool then_wait = false;
};

struct DoorSpec {
  std::string a;
  std::string b;
  bool open = false;
};

struct WorldSpec {
  std::vector<std::string> locations;
  std::vector<DoorSpec> doors;
  std::vector<ObjectSpec> fixtures;
  std::vector<ObjectSpec> distractors;
  int distractors_per_room = 0;
};

struct VariationSpec {
  int id = 0;
  std::map<std::string, std::string> params;
  std::string start;
  std::vector<ObjectSpec> objects;
  std::vector<DoorKey> open_doors;

  // Resolved at load time.
  std::string goal_text;
  std::vector<Milestone> milestones;
  std::vector<ObjectSpec> resolved_objects;
  std::vector<std::string> focus_targets;
};

struct TaskSpec {
  std::string task_type_id;
  std::string theme;
  std::string description_template;
  std::vector<ObjectSpec> object_templates;
  std::vector<MilestoneTemplate> milestone_templates;
  std::vector<VariationSpec> variations;
};

struct TaskSuite {
  WorldSpec world;
  std::vector<TaskSpec> tasks;

  const TaskSpec& task(std::string_view task_type_id) const;
  std::vector<std::string> task_type_ids() const;
  std::vector<std::string> themes() const;
};

struct VariationSplit {
  std::vector<int> train;
  std::vector<int> dev;
  std::vector<int> test;
};

enum class SplitName { train, dev, test };

std::string_view to_string(SplitName s);
SplitName split_from_string(std::string_view s);

// One expert action with the sub-goal it serves. `segment` numbers the
// sub-goal segments of the trajectory in order.
struct ExpertStep {
  Action action;
  SubGoal subgoal;
  std::size_t segment = 0;
  int score_after = 0;
};

}  // namespace subgoal::world
