#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subgoal/annotate/teacher.hpp"
#include "subgoal/annotate/types.hpp"
#include "subgoal/world/engine.hpp"

namespace subgoal::annotate {

inline constexpr int kDefaultBudget = 10;

struct AnnotationInput {
  world::GoalDescription goal;
  std::vector<std::string> expert;
  std::vector<PromptExample> examples;  // exactly two
  std::string preamble;
};

struct AnnotationStats {
  int teacher_calls = 0;
  int reprompts = 0;  // calls beyond the first, parse retries and gap prompts alike
  int removals = 0;
  int gaps = 0;
  int fallbacks = 0;
  std::vector<std::string> warnings;
};

struct AnnotationOutcome {
  AnnotatedTrajectory trajectory;
  AnnotationStats stats;
};

// The two training variations of the task with the shortest expert plans,
// excluding `query_variation`. Ties go to the lower id.
std::vector<PromptExample> select_examples(const world::Engine& engine, const world::TaskSpec& task,
                                           int query_variation, const std::vector<int>& pool);

// The window of whole consecutive segments whose action count is closest to
// `size` (earliest on ties), used as a gap-sized example.
PromptExample clip_example(const PromptExample& example, std::size_t size);

// Names every gap through the teacher, spending at most `attempts` calls in
// total. A gap the teacher fails to name is attached to the preceding
// segment, or to the following one when it opens the trajectory.
std::vector<SubGoalSegment> fill_gaps(const AnnotationInput& input,
                                      const std::vector<SubGoalSegment>& aligned,
                                      const std::vector<Gap>& gaps, TeacherBackend& teacher,
                                      int attempts, AnnotationStats& stats);

// Full teacher round trip for one trajectory: initial prompt, parse (with
// re-prompts on parse failure), alignment, removals and gap filling. Teacher
// calls never exceed 1 + budget. Throws AnnotationError when the teacher is
// unreachable or produced nothing usable.
AnnotationOutcome annotate(const AnnotationInput& input, TeacherBackend& teacher, int budget = kDefaultBudget);

// Merges neighbouring segments that carry the same sub-goal.
std::vector<SubGoalSegment> merge_adjacent(std::vector<SubGoalSegment> segments);

struct VariationAnnotation {
  std::string task_type_id;
  int variation_id = 0;
  std::optional<AnnotationOutcome> outcome;
  std::string error;  // set when outcome is empty
};

struct SplitAnnotationOptions {
  world::SplitName split = world::SplitName::train;
  int budget = kDefaultBudget;
  int workers = 1;
};

// Annotates every variation of `split` for each task. Results are ordered by
// (task order in the suite, variation id) regardless of worker scheduling.
std::vector<VariationAnnotation> annotate_split(const world::Engine& engine, TeacherBackend& teacher,
                                                const SplitAnnotationOptions& options);

}  // namespace subgoal::annotate
