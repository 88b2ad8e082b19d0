#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "subgoal/agent/episode.hpp"
#include "subgoal/annotate/dataset.hpp"
#include "subgoal/common/chat_client.hpp"
#include "subgoal/world/engine.hpp"

namespace subgoal::eval {

// oracle: replays the dataset records of the evaluated variation at both
//   levels (gold records when the dataset has none for it).
// scripted: gold sub-goal replay feeding an executor that runs exactly the
//   gold segment of the sub-goal it is given, else "wait". With restricted
//   knowledge the executor instead uses templates induced from the allowed
//   tasks' training rows.
// flat: no sub-goals; nearest-record replay over the training action rows
//   with the sub-goal fields emptied.
// remote: both levels served by chat endpoints.
// wait: always "wait".
enum class AgentKind { oracle, scripted, flat, remote, wait };

std::string_view to_string(AgentKind kind);
AgentKind agent_kind_from_string(std::string_view s);

struct AgentSpec {
  AgentKind kind = AgentKind::oracle;
  std::optional<agent::NoiseSpec> noise;
  std::optional<ChatEndpoint> subgoal_endpoint;  // remote only
  std::optional<ChatEndpoint> action_endpoint;   // remote only

  std::string label() const;
};

// Annotated training data. Rows left empty are rebuilt from the engine's
// gold annotation of every train variation.
struct AgentResources {
  std::vector<annotate::DatasetRow> action_rows;
  std::vector<annotate::DatasetRow> subgoal_rows;
};

struct AgentPolicies {
  std::shared_ptr<const agent::Policy> subgoal;
  std::shared_ptr<const agent::Policy> action;
};

// Gold step records of one variation, replayed at seed 0.
std::vector<annotate::StepRecord> gold_step_records(const world::Engine& engine, const world::TaskSpec& task,
                                                    int variation_id);

// Resolves an AgentSpec to per-episode policies. All configuration errors
// (missing endpoints, empty noise vocabulary, unknown tasks) surface from
// the constructor, before any episode runs. make() is safe to call from
// several threads.
class AgentFactory {
 public:
  AgentFactory(const world::Engine& engine, AgentSpec spec, AgentResources resources = {},
               std::optional<std::set<std::string>> knowledge_tasks = std::nullopt);

  AgentPolicies make(const world::TaskSpec& task, int variation_id) const;
  const agent::EpisodeNoise* noise() const { return noise_ ? &*noise_ : nullptr; }
  const AgentSpec& spec() const { return spec_; }

 private:
  bool allowed(const std::string& task_type) const;

  const world::Engine& engine_;
  AgentSpec spec_;
  AgentResources resources_;
  std::optional<std::set<std::string>> knowledge_;
  std::optional<agent::EpisodeNoise> noise_;
  std::shared_ptr<const agent::Policy> shared_subgoal_;
  std::shared_ptr<const agent::Policy> shared_action_;
};

}  // namespace subgoal::eval
