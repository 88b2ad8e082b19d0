#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subgoal/common/subgoal.hpp"
#include "subgoal/world/types.hpp"

namespace subgoal::annotate {

struct SubGoalSegment {
  SubGoal subgoal;
  std::vector<std::string> actions;

  friend bool operator==(const SubGoalSegment&, const SubGoalSegment&) = default;
};

// The concatenation of segment actions always equals `expert`.
struct AnnotatedTrajectory {
  world::GoalDescription task;
  std::vector<SubGoalSegment> segments;
  std::vector<std::string> expert;
};

std::vector<std::string> concatenate(const std::vector<SubGoalSegment>& segments);

// Groups an expert plan into its gold segments.
std::vector<SubGoalSegment> gold_segments(const std::vector<world::ExpertStep>& expert);
std::vector<std::string> action_surfaces(const std::vector<world::ExpertStep>& expert);

enum class EditKind { keep, remove, add };

// keep(i, j) consumes generated[i] and expert[j]; remove(i) drops
// generated[i]; add(j) inserts expert[j].
struct EditOp {
  EditKind kind;
  int generated = -1;
  int expert = -1;

  friend bool operator==(const EditOp&, const EditOp&) = default;
};

struct EditScript {
  std::vector<EditOp> ops;
  int cost = 0;
};

// A maximal run of expert actions missing from the teacher's answer.
struct Gap {
  int expert_first = 0;
  int expert_last = 0;
  // Aligned segment the gap follows; -1 when the gap opens the trajectory.
  int insert_after_segment = -1;
  // When the gap falls inside a segment, the number of that segment's
  // actions that precede it. -1 when the gap sits on a segment boundary.
  int split_offset = -1;

  int size() const { return expert_last - expert_first + 1; }
  friend bool operator==(const Gap&, const Gap&) = default;
};

// One worked example (or the query) inside an annotation prompt.
struct PromptExample {
  std::string task_description;
  std::vector<std::string> actions;
  std::vector<SubGoalSegment> segments;  // empty for the query
};

struct TeacherRequest {
  std::string system_preamble;
  std::vector<std::string> examples;  // rendered example blocks
  std::string query;
  double temperature = 0.0;
};

struct TeacherResponse {
  std::string text;
};

struct HistoryEntry {
  std::string action;
  int delta = 0;
  std::string observation;  // display form, "N/A" when suppressed

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

enum class Role { action, subgoal };

std::string_view to_string(Role r);
Role role_from_string(std::string_view s);

// The fields rendered into a policy input. Shared by dataset records and
// the agent runtime so both produce identical text.
struct PromptContext {
  std::string task_desc;
  int time = 0;
  int score = 0;
  std::vector<SubGoal> completed;
  std::optional<SubGoal> current;
  std::vector<HistoryEntry> history;  // oldest first, at most kHistoryWindow
  std::string room_text;
  std::string inventory_text;
  std::string visited_text;

  friend bool operator==(const PromptContext&, const PromptContext&) = default;
};

inline constexpr std::size_t kHistoryWindow = 10;

// One supervised step. The action role sees the sub-goal adopted for this
// step; the sub-goal role sees the state before adoption and predicts it.
struct StepRecord {
  std::string task_type_id;
  int variation_id = 0;

  std::string task_desc;
  int time = 0;
  int score = 0;
  std::vector<SubGoal> completed_subgoals;
  std::optional<SubGoal> current_subgoal;
  std::vector<SubGoal> prior_completed;
  std::optional<SubGoal> prior_subgoal;
  std::vector<HistoryEntry> history;
  std::string room_text;
  std::string inventory_text;
  std::string visited_text;
  std::string target_action;
  std::string target_subgoal;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

}  // namespace subgoal::annotate
