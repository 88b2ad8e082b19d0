#include "subgoal/agent/episode.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <ostream>

#include "subgoal/agent/context.hpp"
#include "subgoal/agent/repair.hpp"
#include "subgoal/annotate/records.hpp"
#include "subgoal/common/errors.hpp"

namespace subgoal::agent {

void EpisodeLimits::validate() const {
  if (max_steps < 1) throw ConfigError("max_steps must be >= 1");
  if (stall_window < 1) throw ConfigError("stall_window must be >= 1");
  if (!(discount > 0.0 && discount <= 1.0)) throw ConfigError("discount must lie in (0, 1]");
}

int EpisodeResult::noise_injections() const {
  int n = 0;
  for (const auto& t : transcript) n += t.noise_injected ? 1 : 0;
  return n;
}

EpisodeResult run_episode(const world::Engine& engine, const world::TaskSpec& task, int variation_id,
                          const Policy& subgoal_policy, const Policy& action_policy, const EpisodeLimits& limits,
                          const EpisodeNoise* noise, std::uint64_t seed) {
  limits.validate();
  auto [state, goal] = engine.instantiate(task, variation_id, seed);

  EpisodeResult result;
  result.goal = goal;
  AgentContext ctx;
  ctx.goal = goal;
  ctx.observe(state);
  result.final_score = state.cumulative_score;

  int last_change = 0;
  double weight = 1.0;
  const std::string desc = annotate::task_desc_of(goal.text.str());

  while (true) {
    TranscriptEntry entry;
    entry.step = state.step_count;
    try {
      std::string raw_subgoal = subgoal_policy.generate(build_subgoal_prompt(ctx));
      std::optional<SubGoal> next = parse_subgoal_lenient(raw_subgoal);
      if (noise && noise->spec.schedule.fires_at(entry.step)) {
        NoiseScene scene{engine.suite().world.locations, engine.visible_objects(state)};
        next = make_noise_subgoal(noise->spec.kind, next, scene, noise->vocabulary,
                                  noise_step_seed(noise->spec, desc, entry.step));
        entry.noise_injected = true;
      }
      ctx.adopt(std::move(next));
      entry.subgoal = ctx.current_subgoal ? ctx.current_subgoal->surface() : "none";
      entry.raw_action = action_policy.generate(build_action_prompt(ctx));
    } catch (const PolicyError& e) {
      result.termination_reason = world::TerminationReason::policy_error;
      result.error = e.what();
      break;
    }

    auto action = repair_action(entry.raw_action, engine.admissible_commands(state));
    entry.repaired_action = action.surface;
    auto [next_state, obs] = engine.step(state, action);
    state = std::move(next_state);

    entry.observation = obs.text.str();
    entry.score_after = obs.score_after;
    result.discounted_return += weight * obs.score_delta;
    weight *= limits.discount;
    if (obs.score_delta != 0) last_change = state.step_count;

    ctx.record({action.surface, obs.score_delta, annotate::display_observation(action.surface, entry.observation)});
    ctx.observe(state);
    result.transcript.push_back(std::move(entry));
    result.final_score = obs.score_after;

    if (obs.done) {
      result.termination_reason = obs.termination_reason;
      break;
    }
    if (state.step_count - last_change >= limits.stall_window) {
      result.termination_reason = world::TerminationReason::stall_limit;
      break;
    }
    if (state.step_count >= limits.max_steps) {
      result.termination_reason = world::TerminationReason::step_limit;
      break;
    }
  }
  result.steps_taken = static_cast<int>(result.transcript.size());
  result.completed_subgoals = ctx.completed_subgoals;
  return result;
}

void write_transcript_jsonl(const EpisodeResult& result, std::ostream& out) {
  for (const auto& t : result.transcript) {
    nlohmann::ordered_json j;
    j["step"] = t.step;
    j["subgoal"] = t.subgoal;
    j["raw_action"] = t.raw_action;
    j["repaired_action"] = t.repaired_action;
    j["observation"] = t.observation;
    j["score"] = t.score_after;
    out << j.dump() << '\n';
  }
}

}  // namespace subgoal::agent
