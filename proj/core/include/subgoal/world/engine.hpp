#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subgoal/world/types.hpp"

namespace subgoal::world {

inline constexpr std::string_view kUnparseable = "I don't understand that.";

// Deterministic multi-task text environment over an immutable TaskSuite.
//
// The engine is stateless: every EnvState is a value owned by the caller and
// step() returns a new one, so a single Engine can be shared by any number of
// concurrent episodes.
class Engine {
 public:
  explicit Engine(std::shared_ptr<const TaskSuite> suite);

  const TaskSuite& suite() const noexcept { return *suite_; }
  std::shared_ptr<const TaskSuite> suite_ptr() const noexcept { return suite_; }

  // Throws RangeError when variation_id is out of range.
  std::pair<EnvState, GoalDescription> instantiate(const TaskSpec& task, int variation_id,
                                                   std::uint64_t seed) const;

  std::pair<EnvState, Observation> step(const EnvState& state, const Action& action) const;
  std::pair<EnvState, Observation> step(const EnvState& state, std::string_view surface) const;

  // Grounds a surface string against the templates and the current state.
  std::optional<Action> parse_action(const EnvState& state, std::string_view surface) const;

  // Sorted by surface; every entry executes without the unparseable path.
  std::vector<Action> admissible_commands(const EnvState& state) const;

  // Scripted expert plan. Each action carries the sub-goal it serves; replay
  // from instantiate() reaches score 100. Throws AuthoringError when a
  // milestone cannot be reached.
  std::vector<ExpertStep> expert_trajectory(const TaskSpec& task, int variation_id) const;

  const TaskSpec& task_of(const EnvState& state) const;
  const VariationSpec& variation_of(const EnvState& state) const;

  // Objects the agent can see: room contents (recursing into open
  // containers) followed by the inventory.
  std::vector<std::string> visible_objects(const EnvState& state) const;
  std::vector<std::string> adjacent_locations(const EnvState& state) const;

 private:
  void check_milestones(EnvState& state) const;
  void tick(EnvState& state) const;

  std::shared_ptr<const TaskSuite> suite_;
};

// "Current environment: This <room> location is called the <room>. Here you
// see: | the agent | ... | You also see: | A door to the ... |"
std::string render_room(const EnvState& state);
// "Current inventory: In your inventory, you see: | ... |"
std::string render_inventory(const EnvState& state);
// "Visited rooms: a, b, c"
std::string render_visited(const EnvState& state);

// Listing entry for one object, e.g. "a fountain (containing a substance called water)".
std::string describe_object(const EnvState& state, const std::string& name);

// 50/25/25 split by position blocks (floors for train and dev). Needs >= 4
// variations (ConfigError otherwise).
VariationSplit split_variations(const TaskSpec& task);
const std::vector<int>& split_members(const VariationSplit& split, SplitName which);

}  // namespace subgoal::world
