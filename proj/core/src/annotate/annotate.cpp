#include "subgoal/annotate/annotate.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "subgoal/annotate/alignment.hpp"
#include "subgoal/annotate/prompt.hpp"
#include "subgoal/common/errors.hpp"
#include "subgoal/common/parallel.hpp"
#include "subgoal/world/engine.hpp"

namespace subgoal::annotate {

std::vector<PromptExample> select_examples(const world::Engine& engine, const world::TaskSpec& task,
                                           int query_variation, const std::vector<int>& pool) {
  std::vector<std::pair<std::size_t, int>> by_length;
  std::map<int, std::vector<world::ExpertStep>> plans;
  for (int v : pool) {
    if (v == query_variation) continue;
    plans[v] = engine.expert_trajectory(task, v);
    by_length.emplace_back(plans[v].size(), v);
  }
  if (by_length.size() < 2) {
    throw PreconditionError("task '" + task.task_type_id + "' has fewer than 2 example variations");
  }
  std::sort(by_length.begin(), by_length.end());
  std::vector<PromptExample> out;
  for (std::size_t k = 0; k < 2; ++k) {
    int v = by_length[k].second;
    const auto& plan = plans[v];
    out.push_back({task.variations[static_cast<std::size_t>(v)].goal_text, action_surfaces(plan),
                   gold_segments(plan)});
  }
  return out;
}

PromptExample clip_example(const PromptExample& example, std::size_t size) {
  const auto& segs = example.segments;
  std::size_t best_first = 0, best_last = 0;
  std::size_t best_err = static_cast<std::size_t>(-1);
  for (std::size_t first = 0; first < segs.size(); ++first) {
    std::size_t count = 0;
    for (std::size_t last = first; last < segs.size(); ++last) {
      count += segs[last].actions.size();
      std::size_t err = count > size ? count - size : size - count;
      if (err < best_err) {
        best_err = err;
        best_first = first;
        best_last = last;
      }
      if (count >= size) break;
    }
  }
  PromptExample out;
  out.task_description = example.task_description;
  if (segs.empty()) return out;
  out.segments.assign(segs.begin() + static_cast<std::ptrdiff_t>(best_first),
                      segs.begin() + static_cast<std::ptrdiff_t>(best_last) + 1);
  out.actions = concatenate(out.segments);
  return out;
}

std::vector<SubGoalSegment> merge_adjacent(std::vector<SubGoalSegment> segments) {
  std::vector<SubGoalSegment> out;
  for (auto& s : segments) {
    if (s.actions.empty()) continue;
    if (!out.empty() && out.back().subgoal == s.subgoal) {
      out.back().actions.insert(out.back().actions.end(), s.actions.begin(), s.actions.end());
    } else {
      out.push_back(std::move(s));
    }
  }
  return out;
}

namespace {

struct Piece {
  int gap = -1;  // index into gaps, or -1 for aligned actions
  SubGoalSegment segment;
};

// Accepts a response that covers the gap exactly, or a single segment whose
// sub-goal then names the whole gap.
std::optional<std::vector<SubGoalSegment>> accept_gap_answer(const ParsedResponse& parsed,
                                                             const std::vector<std::string>& gap_actions) {
  if (concatenate(parsed.segments) == gap_actions) return merge_adjacent(parsed.segments);
  if (parsed.segments.size() == 1) return std::vector<SubGoalSegment>{{parsed.segments[0].subgoal, gap_actions}};
  return std::nullopt;
}

}  // namespace

std::vector<SubGoalSegment> fill_gaps(const AnnotationInput& input,
                                      const std::vector<SubGoalSegment>& aligned,
                                      const std::vector<Gap>& gaps, TeacherBackend& teacher,
                                      int attempts, AnnotationStats& stats) {
  const auto& expert = input.expert;
  std::vector<int> gap_at(expert.size(), -1);
  std::size_t gap_total = 0;
  for (std::size_t g = 0; g < gaps.size(); ++g) {
    for (int j = gaps[g].expert_first; j <= gaps[g].expert_last; ++j) {
      gap_at.at(static_cast<std::size_t>(j)) = static_cast<int>(g);
    }
    gap_total += static_cast<std::size_t>(gaps[g].size());
  }
  if (concatenate(aligned).size() + gap_total != expert.size()) {
    throw PreconditionError("aligned segments and gaps do not cover the expert trajectory");
  }

  // Lay out pieces in expert order; a gap inside a segment splits it.
  std::vector<Piece> pieces;
  std::size_t seg = 0, off = 0;
  int owner_of_last = -1;
  for (std::size_t j = 0; j < expert.size(); ++j) {
    if (gap_at[j] >= 0) {
      if (pieces.empty() || pieces.back().gap != gap_at[j]) pieces.push_back({gap_at[j], {}});
      pieces.back().segment.actions.push_back(expert[j]);
      continue;
    }
    while (off >= aligned[seg].actions.size()) {
      ++seg;
      off = 0;
    }
    if (aligned[seg].actions[off] != expert[j]) {
      throw PreconditionError("aligned segments are not a subsequence of the expert trajectory");
    }
    if (pieces.empty() || pieces.back().gap >= 0 || owner_of_last != static_cast<int>(seg)) {
      pieces.push_back({-1, {aligned[seg].subgoal, {}}});
    }
    owner_of_last = static_cast<int>(seg);
    pieces.back().segment.actions.push_back(expert[j]);
    ++off;
  }

  std::vector<SubGoalSegment> out;
  std::vector<std::string> pending_front;
  for (const auto& piece : pieces) {
    if (piece.gap < 0) {
      SubGoalSegment s = piece.segment;
      if (!pending_front.empty()) {
        s.actions.insert(s.actions.begin(), pending_front.begin(), pending_front.end());
        pending_front.clear();
      }
      out.push_back(std::move(s));
      continue;
    }

    const auto& gap_actions = piece.segment.actions;
    std::optional<std::vector<SubGoalSegment>> named;
    while (!named && attempts > 0) {
      std::vector<PromptExample> examples;
      for (const auto& ex : input.examples) examples.push_back(clip_example(ex, gap_actions.size()));
      auto req = build_annotation_prompt(input.preamble, examples, {input.goal.text.str(), gap_actions, {}});
      --attempts;
      ++stats.teacher_calls;
      ++stats.reprompts;
      auto resp = teacher.complete(req);
      try {
        auto parsed = parse_subgoal_response(resp.text);
        named = accept_gap_answer(parsed, gap_actions);
        if (!named) stats.warnings.push_back("gap answer does not cover the gap");
      } catch (const ParseError& e) {
        stats.warnings.push_back(std::string("gap answer unparseable: ") + e.what());
      }
    }
    if (named) {
      std::vector<SubGoalSegment> fill = std::move(*named);
      if (!pending_front.empty()) {
        fill.front().actions.insert(fill.front().actions.begin(), pending_front.begin(), pending_front.end());
        pending_front.clear();
      }
      out.insert(out.end(), fill.begin(), fill.end());
      continue;
    }
    ++stats.fallbacks;
    if (!out.empty()) {
      out.back().actions.insert(out.back().actions.end(), gap_actions.begin(), gap_actions.end());
    } else {
      pending_front.insert(pending_front.end(), gap_actions.begin(), gap_actions.end());
    }
  }
  if (!pending_front.empty()) {
    throw AnnotationError("no segment to attach " + std::to_string(pending_front.size()) +
                          " unnamed action(s) to");
  }
  return merge_adjacent(std::move(out));
}

AnnotationOutcome annotate(const AnnotationInput& input, TeacherBackend& teacher, int budget) {
  if (input.expert.empty()) throw PreconditionError("cannot annotate an empty expert trajectory");
  if (budget < 0) throw PreconditionError("budget must be >= 0");
  const std::string where =
      "task '" + input.goal.task_type_id + "' variation " + std::to_string(input.goal.variation_id);

  AnnotationOutcome result;
  auto& stats = result.stats;
  auto req = build_annotation_prompt(input.preamble, input.examples, {input.goal.text.str(), input.expert, {}});

  try {
    std::optional<ParsedResponse> parsed;
    for (int spent = 0;; ++spent) {
      ++stats.teacher_calls;
      auto resp = teacher.complete(req);
      try {
        parsed = parse_subgoal_response(resp.text);
        break;
      } catch (const ParseError& e) {
        stats.warnings.push_back(std::string("initial answer unparseable: ") + e.what());
      }
      if (spent == budget) break;
      ++stats.reprompts;
    }
    if (!parsed) {
      throw AnnotationError(where + ": no parseable teacher answer after " +
                            std::to_string(stats.teacher_calls) + " call(s)");
    }
    stats.warnings.insert(stats.warnings.end(), parsed->warnings.begin(), parsed->warnings.end());

    auto script = edit_script(concatenate(parsed->segments), input.expert);
    stats.removals = static_cast<int>(std::count_if(script.ops.begin(), script.ops.end(),
                                                    [](const EditOp& op) { return op.kind == EditKind::remove; }));
    auto aligned = apply_removals(parsed->segments, script);
    auto gaps = gap_groups(script, aligned);
    stats.gaps = static_cast<int>(gaps.size());
    auto segments = gaps.empty() ? merge_adjacent(std::move(aligned))
                                 : fill_gaps(input, aligned, gaps, teacher, budget - stats.reprompts, stats);

    if (concatenate(segments) != input.expert) {
      // Hard postcondition; a failure here is a bug in the alignment code.
      throw AnnotationError(where + ": aligned segments do not reproduce the expert trajectory");
    }
    result.trajectory = {input.goal, std::move(segments), input.expert};
  } catch (const TransportError& e) {
    throw AnnotationError(where + ": teacher unreachable after " + std::to_string(e.attempts()) +
                          " attempt(s): " + e.what());
  } catch (const AnnotationError& e) {
    if (std::string_view(e.what()).find(where) == 0) throw;
    throw AnnotationError(where + ": " + e.what());
  }
  return result;
}

std::vector<VariationAnnotation> annotate_split(const world::Engine& engine, TeacherBackend& teacher,
                                                const SplitAnnotationOptions& options) {
  struct Job {
    const world::TaskSpec* task;
    int variation;
    std::vector<int> pool;
  };
  std::vector<Job> jobs;
  for (const auto& task : engine.suite().tasks) {
    auto split = world::split_variations(task);
    for (int v : world::split_members(split, options.split)) jobs.push_back({&task, v, split.train});
  }
  const std::string preamble = environment_preamble(engine.suite().world.locations);

  std::vector<VariationAnnotation> out(jobs.size());
  parallel_for(jobs.size(), options.workers, [&](std::size_t i) {
    const auto& job = jobs[i];
    auto& slot = out[i];
    slot.task_type_id = job.task->task_type_id;
    slot.variation_id = job.variation;
    try {
      AnnotationInput input;
      auto [state, goal] = engine.instantiate(*job.task, job.variation, 0);
      input.goal = goal;
      input.expert = action_surfaces(engine.expert_trajectory(*job.task, job.variation));
      input.examples = select_examples(engine, *job.task, job.variation, job.pool);
      input.preamble = preamble;
      slot.outcome = annotate(input, teacher, options.budget);
    } catch (const AnnotationError& e) {
      slot.error = e.what();
    } catch (const PreconditionError& e) {
      slot.error = e.what();
    }
  });
  return out;
}

}  // namespace subgoal::annotate
