#include "subgoal/eval/agents.hpp"

#include "subgoal/annotate/records.hpp"
#include "subgoal/common/errors.hpp"

namespace subgoal::eval {

using annotate::DatasetRow;
using annotate::Role;

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::oracle: return "oracle";
    case AgentKind::scripted: return "scripted";
    case AgentKind::flat: return "flat";
    case AgentKind::remote: return "remote";
    case AgentKind::wait: return "wait";
  }
  return "oracle";
}

AgentKind agent_kind_from_string(std::string_view s) {
  for (auto k : {AgentKind::oracle, AgentKind::scripted, AgentKind::flat, AgentKind::remote, AgentKind::wait}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("unknown agent '" + std::string(s) + "' (expected oracle|scripted|flat|remote|wait)");
}

std::string AgentSpec::label() const {
  std::string out(to_string(kind));
  if (noise) out += " + " + agent::noise_label(*noise);
  return out;
}

std::vector<annotate::StepRecord> gold_step_records(const world::Engine& engine, const world::TaskSpec& task,
                                                    int variation_id) {
  auto expert = engine.expert_trajectory(task, variation_id);
  annotate::AnnotatedTrajectory annotated{engine.instantiate(task, variation_id, 0).second,
                                          annotate::gold_segments(expert), annotate::action_surfaces(expert)};
  return annotate::build_step_records(annotated, engine);
}

namespace {

std::vector<DatasetRow> rows_for(const std::vector<DatasetRow>& rows, const std::string& task, int variation) {
  std::vector<DatasetRow> out;
  for (const auto& r : rows) {
    if (r.task_type == task && r.variation == variation) out.push_back(r);
  }
  return out;
}

}  // namespace

bool AgentFactory::allowed(const std::string& task_type) const { return !knowledge_ || knowledge_->count(task_type); }

AgentFactory::AgentFactory(const world::Engine& engine, AgentSpec spec, AgentResources resources,
                           std::optional<std::set<std::string>> knowledge_tasks)
    : engine_(engine), spec_(std::move(spec)), resources_(std::move(resources)), knowledge_(std::move(knowledge_tasks)) {
  const auto& suite = engine_.suite();
  if (knowledge_) {
    for (const auto& t : *knowledge_) suite.task(t);
  }
  const bool need_actions = resources_.action_rows.empty();
  const bool need_subgoals = resources_.subgoal_rows.empty();
  if (need_actions || need_subgoals) {
    for (const auto& task : suite.tasks) {
      for (int v : world::split_variations(task).train) {
        auto records = gold_step_records(engine_, task, v);
        if (need_actions) {
          auto rows = annotate::to_rows(records, Role::action);
          resources_.action_rows.insert(resources_.action_rows.end(), rows.begin(), rows.end());
        }
        if (need_subgoals) {
          auto rows = annotate::to_rows(records, Role::subgoal);
          resources_.subgoal_rows.insert(resources_.subgoal_rows.end(), rows.begin(), rows.end());
        }
      }
    }
  }

  std::vector<DatasetRow> known_actions;
  std::vector<DatasetRow> known_subgoals;
  for (const auto& r : resources_.action_rows) {
    if (allowed(r.task_type)) known_actions.push_back(r);
  }
  for (const auto& r : resources_.subgoal_rows) {
    if (allowed(r.task_type)) known_subgoals.push_back(r);
  }

  if (spec_.noise) {
    noise_ = agent::EpisodeNoise{*spec_.noise, agent::SubgoalVocabulary::from_rows(known_subgoals)};
    if (spec_.noise->kind == agent::NoiseKind::random && noise_->vocabulary.empty()) {
      throw ConfigError("random sub-goal noise needs a sub-goal vocabulary, but the training rows have none");
    }
  }

  switch (spec_.kind) {
    case AgentKind::oracle:
      break;
    case AgentKind::scripted:
      if (knowledge_) {
        if (known_actions.empty()) throw ConfigError("scripted agent has no training rows for the allowed tasks");
        shared_action_ = std::make_shared<agent::SkillExecutor>(agent::SkillExecutor::from_rows(known_actions));
      }
      break;
    case AgentKind::flat:
      if (known_actions.empty()) throw ConfigError("flat agent has no training rows for the allowed tasks");
      shared_subgoal_ = std::make_shared<agent::FixedResponse>("none");
      shared_action_ = std::make_shared<agent::ReplayOracle>(agent::flatten_rows(known_actions), Role::action);
      break;
    case AgentKind::remote:
      if (!spec_.subgoal_endpoint || !spec_.action_endpoint) {
        throw ConfigError("remote agent needs both a sub-goal and an action endpoint");
      }
      shared_subgoal_ = std::make_shared<agent::RemotePolicy>(*spec_.subgoal_endpoint);
      shared_action_ = std::make_shared<agent::RemotePolicy>(*spec_.action_endpoint);
      break;
    case AgentKind::wait:
      shared_subgoal_ = std::make_shared<agent::FixedResponse>("none");
      shared_action_ = std::make_shared<agent::FixedResponse>("wait");
      break;
  }
}

AgentPolicies AgentFactory::make(const world::TaskSpec& task, int variation_id) const {
  switch (spec_.kind) {
    case AgentKind::oracle: {
      auto actions = rows_for(resources_.action_rows, task.task_type_id, variation_id);
      auto subgoals = rows_for(resources_.subgoal_rows, task.task_type_id, variation_id);
      if (actions.empty() || subgoals.empty()) {
        auto records = gold_step_records(engine_, task, variation_id);
        if (actions.empty()) actions = annotate::to_rows(records, Role::action);
        if (subgoals.empty()) subgoals = annotate::to_rows(records, Role::subgoal);
      }
      return {std::make_shared<agent::ReplayOracle>(subgoals, Role::subgoal),
              std::make_shared<agent::ReplayOracle>(actions, Role::action)};
    }
    case AgentKind::scripted: {
      auto records = gold_step_records(engine_, task, variation_id);
      auto planner = std::make_shared<agent::ReplayOracle>(annotate::to_rows(records, Role::subgoal), Role::subgoal);
      if (shared_action_) return {planner, shared_action_};
      auto expert = engine_.expert_trajectory(task, variation_id);
      return {planner, std::make_shared<agent::SkillExecutor>(
                           agent::SkillExecutor::literal(annotate::gold_segments(expert)))};
    }
    case AgentKind::flat:
    case AgentKind::remote:
    case AgentKind::wait:
      return {shared_subgoal_, shared_action_};
  }
  return {shared_subgoal_, shared_action_};
}

}  // namespace subgoal::eval
