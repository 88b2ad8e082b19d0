#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "subgoal/agent/noise.hpp"
#include "subgoal/agent/policy.hpp"
#include "subgoal/world/engine.hpp"

namespace subgoal::agent {

struct EpisodeLimits {
  int max_steps = 100;
  int stall_window = 50;
  double discount = 1.0;

  // Throws ConfigError unless max_steps >= 1, stall_window >= 1 and the
  // discount lies in (0, 1].
  void validate() const;
};

struct TranscriptEntry {
  int step = 0;
  std::string subgoal;  // surface, "none" when unset
  std::string raw_action;
  std::string repaired_action;
  std::string observation;
  int score_after = 0;
  bool noise_injected = false;
};

struct EpisodeResult {
  world::GoalDescription goal;
  int final_score = 0;
  int steps_taken = 0;
  world::TerminationReason termination_reason = world::TerminationReason::none;
  std::string error;  // set when termination_reason is policy_error
  double discounted_return = 0.0;
  std::vector<TranscriptEntry> transcript;
  std::vector<SubGoal> completed_subgoals;

  int noise_injections() const;
};

struct EpisodeNoise {
  NoiseSpec spec;
  SubgoalVocabulary vocabulary;
};

// Runs one hierarchical episode. Each step queries the sub-goal policy (or
// the noise source when the schedule fires), adopts its sub-goal, queries
// the action policy, repairs the action against the admissible commands and
// steps the engine. Ends on the engine's own termination, after
// `stall_window` steps without a score change, or at `max_steps`. A
// PolicyError ends the episode with reason policy_error and the score
// reached so far.
EpisodeResult run_episode(const world::Engine& engine, const world::TaskSpec& task, int variation_id,
                          const Policy& subgoal_policy, const Policy& action_policy, const EpisodeLimits& limits = {},
                          const EpisodeNoise* noise = nullptr, std::uint64_t seed = 0);

// One JSON object per step: {step, subgoal, raw_action, repaired_action,
// observation, score}.
void write_transcript_jsonl(const EpisodeResult& result, std::ostream& out);

}  // namespace subgoal::agent
