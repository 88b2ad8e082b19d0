#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "subgoal/annotate/types.hpp"
#include "subgoal/world/engine.hpp"

namespace subgoal::annotate {

// Observation as shown in the action history: "N/A" after "look around" and
// for texts that would not survive the history grammar (empty, or containing
// '|', '<' or a line break).
std::string display_observation(std::string_view action, std::string_view observation);

// Goal text without its trailing period, as it opens every policy input.
std::string task_desc_of(std::string_view goal_text);

// One record per expert action, replayed through the engine from a seed-0
// instantiation. Throws DataError naming the step if the replay diverges
// from the annotated trajectory's recorded scores.
std::vector<StepRecord> build_step_records(const AnnotatedTrajectory& annotated, const world::Engine& engine);

PromptContext context_for(const StepRecord& record, Role role);

// Policy input text for `role`; see the dataset format in the README.
std::string render_input(const PromptContext& context, Role role);

// Inverse of render_input. Throws ParseError with the byte offset of the
// first mismatch.
PromptContext parse_input(std::string_view text, Role role);

struct SerializedRecord {
  std::string input;
  std::string target;
};

SerializedRecord serialize_record(const StepRecord& record, Role role);
PromptContext parse_record(std::string_view input, Role role);

// "none" for an empty list; surfaces joined by ", " otherwise.
std::string render_subgoal_list(const std::vector<SubGoal>& list);
std::vector<SubGoal> parse_subgoal_list(std::string_view text);

}  // namespace subgoal::annotate
