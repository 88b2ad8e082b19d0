#include <benchmark/benchmark.h>

#include <memory>

#include "subgoal/agent/repair.hpp"
#include "subgoal/annotate/alignment.hpp"
#include "subgoal/annotate/records.hpp"
#include "subgoal/common/rng.hpp"
#include "subgoal/world/engine.hpp"
#include "subgoal/world/suite.hpp"

using namespace subgoal;

namespace {

const world::Engine& bench_engine() {
  static const auto suite = std::make_shared<world::TaskSuite>(world::load_task_suite(SUBGOAL_BENCH_SUITE));
  static const world::Engine engine(suite);
  return engine;
}

std::vector<std::string> random_tokens(Rng& rng, std::size_t n, std::uint64_t alphabet) {
  std::vector<std::string> out(n);
  for (auto& t : out) t = "action " + std::to_string(rng.below(alphabet));
  return out;
}

void BM_EditScript(benchmark::State& state) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  auto generated = random_tokens(rng, n, 12);
  auto expert = random_tokens(rng, n, 12);
  for (auto _ : state) benchmark::DoNotOptimize(annotate::edit_script(generated, expert));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EditScript)->RangeMultiplier(2)->Range(8, 256)->Complexity();

// Replays one expert plan per iteration.
void BM_ExpertReplay(benchmark::State& state) {
  const auto& engine = bench_engine();
  const auto& task = engine.suite().tasks[static_cast<std::size_t>(state.range(0))];
  auto plan = engine.expert_trajectory(task, 0);
  std::int64_t steps = 0;
  for (auto _ : state) {
    auto s = engine.instantiate(task, 0, 0).first;
    for (const auto& step : plan) s = engine.step(s, step.action).first;
    steps += static_cast<std::int64_t>(plan.size());
    benchmark::DoNotOptimize(s.cumulative_score);
  }
  state.SetItemsProcessed(steps);
  state.SetLabel(task.task_type_id);
}
BENCHMARK(BM_ExpertReplay)->DenseRange(0, 5);

void BM_AdmissibleAndRepair(benchmark::State& state) {
  const auto& engine = bench_engine();
  const auto& task = engine.suite().task("boil");
  auto s = engine.instantiate(task, 0, 0).first;
  for (auto _ : state) {
    auto adm = engine.admissible_commands(s);
    benchmark::DoNotOptimize(agent::repair_action("opne door to kitchn", adm));
  }
}
BENCHMARK(BM_AdmissibleAndRepair);

void BM_RecordRoundTrip(benchmark::State& state) {
  const auto& engine = bench_engine();
  const auto& task = engine.suite().task("grow-plant");
  auto plan = engine.expert_trajectory(task, 0);
  annotate::AnnotatedTrajectory at{engine.instantiate(task, 0, 0).second, annotate::gold_segments(plan),
                                   annotate::action_surfaces(plan)};
  auto records = annotate::build_step_records(at, engine);
  const auto& rec = records[records.size() / 2];
  for (auto _ : state) {
    auto ser = annotate::serialize_record(rec, annotate::Role::action);
    benchmark::DoNotOptimize(annotate::parse_record(ser.input, annotate::Role::action));
  }
}
BENCHMARK(BM_RecordRoundTrip);

}  // namespace

// The packaged benchmark_main archive is LTO bytecode from another compiler
// release, so the entry point is defined here.
BENCHMARK_MAIN();
