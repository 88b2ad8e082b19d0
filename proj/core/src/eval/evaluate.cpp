#include "subgoal/eval/evaluate.hpp"

#include <algorithm>
#include <sstream>

#include "subgoal/common/errors.hpp"
#include "subgoal/common/parallel.hpp"

namespace subgoal::eval {

void EvalConfig::validate() const {
  if (max_variations < 1) throw ConfigError("max_variations must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  limits.validate();
}

namespace {

struct Job {
  const world::TaskSpec* task;
  int variation;
};

std::vector<const world::TaskSpec*> selected_tasks(const EvalConfig& config, const world::TaskSuite& suite) {
  std::vector<const world::TaskSpec*> out;
  if (config.task_types.empty()) {
    for (const auto& t : suite.tasks) out.push_back(&t);
  } else {
    for (const auto& id : config.task_types) out.push_back(&suite.task(id));
  }
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->task_type_id < b->task_type_id; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

EvalRun run_evaluation(const EvalConfig& config, const world::Engine& engine, const AgentFactory& factory) {
  config.validate();
  std::vector<Job> jobs;
  for (const auto* task : selected_tasks(config, engine.suite())) {
    const auto split = world::split_variations(*task);
    const auto& members = world::split_members(split, config.split);
    const std::size_t n = std::min(members.size(), static_cast<std::size_t>(config.max_variations));
    for (std::size_t i = 0; i < n; ++i) jobs.push_back({task, members[i]});
  }

  std::vector<agent::EpisodeResult> episodes(jobs.size());
  std::vector<int> expert_lengths(jobs.size());
  parallel_for(jobs.size(), config.workers, [&](std::size_t i) {
    const auto& job = jobs[i];
    auto policies = factory.make(*job.task, job.variation);
    episodes[i] = agent::run_episode(engine, *job.task, job.variation, *policies.subgoal, *policies.action,
                                     config.limits, factory.noise(), config.seed);
    expert_lengths[i] = static_cast<int>(engine.expert_trajectory(*job.task, job.variation).size());
  });

  EvalRun run;
  run.report.agent = config.agent.label();
  run.report.split = std::string(world::to_string(config.split));
  run.report.noise = config.agent.noise ? agent::noise_label(*config.agent.noise) : "";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto& task = run.report.per_task[jobs[i].task->task_type_id];
    const auto& ep = episodes[i];
    task.per_variation.push_back(
        {jobs[i].variation, ep.final_score, ep.steps_taken, ep.termination_reason, expert_lengths[i], ep.error});
  }
  for (auto& [_, task] : run.report.per_task) {
    double score = 0.0;
    double length = 0.0;
    for (const auto& v : task.per_variation) {
      score += v.score;
      length += v.expert_length;
    }
    const auto n = static_cast<double>(task.per_variation.size());
    task.avg_score = score / n;
    task.expert_length_avg = length / n;
  }
  finalize(run.report);
  run.episodes = std::move(episodes);
  return run;
}

EvalRun run_evaluation(const EvalConfig& config, const world::Engine& engine, const AgentResources& resources) {
  config.validate();
  AgentFactory factory(engine, config.agent, resources);
  return run_evaluation(config, engine, factory);
}

EvalReport evaluate(const EvalConfig& config, const world::Engine& engine, const AgentResources& resources) {
  return run_evaluation(config, engine, resources).report;
}

std::vector<agent::NoiseSpec> default_noise_grid(std::uint64_t seed) {
  std::vector<agent::NoiseSpec> grid;
  for (auto kind : {agent::NoiseKind::random, agent::NoiseKind::semi_random}) {
    for (auto schedule : {agent::NoiseSchedule::first_step_only(), agent::NoiseSchedule::every_k(10),
                          agent::NoiseSchedule::every_step()}) {
      grid.push_back({kind, schedule, seed});
    }
  }
  return grid;
}

std::vector<AblationCell> run_ablation_matrix(const EvalConfig& base, const std::vector<agent::NoiseSpec>& grid,
                                              const world::Engine& engine, const AgentResources& resources) {
  if (grid.empty()) throw ConfigError("ablation grid is empty");
  base.validate();
  // Resolve every cell before running anything so a bad cell fails early.
  std::vector<std::unique_ptr<AgentFactory>> factories;
  std::vector<EvalConfig> configs;
  for (const auto& noise : grid) {
    EvalConfig cfg = base;
    cfg.agent.noise = noise;
    factories.push_back(std::make_unique<AgentFactory>(engine, cfg.agent, resources));
    configs.push_back(std::move(cfg));
  }
  std::vector<AblationCell> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.push_back({grid[i], run_evaluation(configs[i], engine, *factories[i]).report});
  }
  return out;
}

std::string ablation_markdown(const std::vector<AblationCell>& cells) {
  std::vector<std::string> columns;
  for (const auto& c : cells) {
    auto label = agent::schedule_label(c.noise.schedule);
    if (std::find(columns.begin(), columns.end(), label) == columns.end()) columns.push_back(label);
  }
  std::ostringstream out;
  out << "| Sub-goals |";
  for (const auto& c : columns) out << ' ' << c << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) out << "---:|";
  out << '\n';
  for (auto kind : {agent::NoiseKind::random, agent::NoiseKind::semi_random}) {
    bool any = false;
    std::ostringstream row;
    row << "| " << agent::to_string(kind) << " |";
    for (const auto& col : columns) {
      std::optional<double> value;
      for (const auto& c : cells) {
        if (c.noise.kind == kind && agent::schedule_label(c.noise.schedule) == col) value = c.report.overall_avg;
      }
      any = any || value.has_value();
      row << ' ' << format_percent(value) << " |";
    }
    if (any) out << row.str() << '\n';
  }
  return out.str();
}

GeneralizationReport generalization_eval(const std::vector<std::string>& seen, const EvalConfig& config,
                                         const world::Engine& engine, const AgentResources& resources) {
  if (seen.empty()) throw ConfigError("generalization needs at least one seen task type");
  std::set<std::string> seen_set(seen.begin(), seen.end());
  GeneralizationReport out;
  for (const auto& id : engine.suite().task_type_ids()) {
    (seen_set.count(id) ? out.seen : out.unseen).push_back(id);
  }
  for (const auto& id : seen_set) engine.suite().task(id);
  if (out.unseen.empty()) throw ConfigError("generalization needs at least one unseen task type");

  EvalConfig cfg = config;
  cfg.task_types.clear();
  AgentFactory factory(engine, cfg.agent, resources, seen_set);
  out.report = run_evaluation(cfg, engine, factory).report;

  auto mean = [&](const std::vector<std::string>& ids) {
    double sum = 0.0;
    for (const auto& id : ids) sum += out.report.per_task.at(id).avg_score;
    return sum / static_cast<double>(ids.size());
  };
  out.overall = out.report.overall_avg;
  out.seen_avg = mean(out.seen);
  out.unseen_avg = mean(out.unseen);
  return out;
}

}  // namespace subgoal::eval
