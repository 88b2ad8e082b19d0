#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "subgoal/agent/episode.hpp"
#include "subgoal/eval/agents.hpp"
#include "subgoal/eval/report.hpp"

namespace subgoal::eval {

struct EvalConfig {
  std::vector<std::string> task_types;  // empty = every task in the suite
  world::SplitName split = world::SplitName::test;
  int max_variations = 10;
  AgentSpec agent;
  std::uint64_t seed = 0;  // environment seed for every episode
  agent::EpisodeLimits limits;
  int workers = 4;

  void validate() const;  // ConfigError on bad values
};

struct EvalRun {
  EvalReport report;
  // Ordered by (task type, variation), matching the report.
  std::vector<agent::EpisodeResult> episodes;
};

// Runs the first min(max_variations, |split|) variations of each task type
// and aggregates their final scores. Episodes fan out over `workers`
// threads; the result does not depend on completion order.
EvalRun run_evaluation(const EvalConfig& config, const world::Engine& engine, const AgentFactory& factory);
EvalRun run_evaluation(const EvalConfig& config, const world::Engine& engine, const AgentResources& resources = {});
EvalReport evaluate(const EvalConfig& config, const world::Engine& engine, const AgentResources& resources = {});

struct AblationCell {
  agent::NoiseSpec noise;
  EvalReport report;
};

// {random, semi_random} x {first step, every 10 steps, every step}, all on
// one seed so cells are paired.
std::vector<agent::NoiseSpec> default_noise_grid(std::uint64_t seed);

// One report per grid entry, replacing the base config's noise. Throws
// ConfigError on an empty grid.
std::vector<AblationCell> run_ablation_matrix(const EvalConfig& base, const std::vector<agent::NoiseSpec>& grid,
                                              const world::Engine& engine, const AgentResources& resources = {});

// Rows per noise kind, one column per schedule.
std::string ablation_markdown(const std::vector<AblationCell>& cells);

struct GeneralizationReport {
  std::vector<std::string> seen;
  std::vector<std::string> unseen;
  double overall = 0.0;
  double seen_avg = 0.0;
  double unseen_avg = 0.0;
  EvalReport report;
};

// Evaluates every task with policies built only from the seen tasks'
// training rows. Throws ConfigError when seen is empty, names an unknown
// task, or covers the whole suite.
GeneralizationReport generalization_eval(const std::vector<std::string>& seen, const EvalConfig& config,
                                         const world::Engine& engine, const AgentResources& resources = {});

}  // namespace subgoal::eval
