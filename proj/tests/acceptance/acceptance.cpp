// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "subgoal/agent/episode.hpp"
#include "subgoal/agent/policy.hpp"
#include "subgoal/agent/repair.hpp"
#include "subgoal/annotate/alignment.hpp"
#include "subgoal/annotate/annotate.hpp"
#include "subgoal/annotate/dataset.hpp"
#include "subgoal/annotate/prompt.hpp"
#include "subgoal/annotate/records.hpp"
#include "subgoal/annotate/teacher.hpp"
#include "subgoal/common/errors.hpp"
#include "subgoal/common/rng.hpp"
#include "subgoal/common/text.hpp"
#include "subgoal/eval/evaluate.hpp"

using namespace subgoal;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail.clear();
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const world::Engine& engine() { return fixtures::bundled_engine(); }

// ---------------------------------------------------------------------------
// 1. validate, annotate, build datasets, replay oracle on every train variation.

Outcome pipeline() {
  Outcome o;
  const auto t0 = Clock::now();
  auto suite = std::make_shared<world::TaskSuite>(
      world::load_task_suite(fixtures::bundled_suite_path(), world::kBundledSuiteRequirements));
  world::Engine eng(suite);

  int replayed = 0;
  for (const auto& task : suite->tasks) {
    for (const auto& v : task.variations) {
      auto state = eng.instantiate(task, v.id, 0).first;
      for (const auto& step : eng.expert_trajectory(task, v.id)) state = eng.step(state, step.action).first;
      o.require(state.cumulative_score == 100, task.task_type_id + " variation " + std::to_string(v.id) +
                                                   " replays to " + std::to_string(state.cumulative_score));
      ++replayed;
    }
  }

  annotate::ScriptedOracleTeacher teacher(eng);
  annotate::SplitAnnotationOptions options;
  options.workers = 4;
  auto results = annotate::annotate_split(eng, teacher, options);
  std::vector<annotate::StepRecord> records;
  for (const auto& r : results) {
    if (!r.outcome) {
      o.require(false, "annotation failed: " + r.error);
      continue;
    }
    auto recs = annotate::build_step_records(r.outcome->trajectory, eng);
    records.insert(records.end(), recs.begin(), recs.end());
  }

  fixtures::TempDir dir;
  annotate::write_dataset(records, annotate::Role::action, dir.file("action.jsonl"));
  annotate::write_dataset(records, annotate::Role::subgoal, dir.file("subgoal.jsonl"));
  eval::AgentResources res{annotate::read_dataset(dir.file("action.jsonl")),
                           annotate::read_dataset(dir.file("subgoal.jsonl"))};

  eval::EvalConfig cfg;
  cfg.split = world::SplitName::train;
  cfg.max_variations = 1 << 20;
  cfg.agent.kind = eval::AgentKind::oracle;
  auto report = eval::evaluate(cfg, eng, res);
  const double secs = seconds_since(t0);

  std::size_t train_total = 0;
  for (const auto& task : suite->tasks) train_total += world::split_variations(task).train.size();
  std::size_t evaluated = 0;
  for (const auto& [_, t] : report.per_task) evaluated += t.per_variation.size();

  o.require(evaluated == train_total, "evaluated " + std::to_string(evaluated) + " of " + std::to_string(train_total));
  o.require(eval::format_percent(report.overall_avg) == "100.00", "overall " + fmt(report.overall_avg));
  o.require(report.solved_count == static_cast<int>(suite->tasks.size()), "solved " + std::to_string(report.solved_count));
  o.require(secs < 60.0, "took " + fmt(secs) + " s");
  if (o.pass) {
    o.detail = std::to_string(replayed) + " plans validated, " + std::to_string(records.size()) + " records, overall " +
               eval::format_percent(report.overall_avg) + ", solved " + std::to_string(report.solved_count) + "/" +
               std::to_string(suite->tasks.size()) + ", " + fmt(secs) + " s";
  }
  return o;
}

// ---------------------------------------------------------------------------
// 2. Alignment cost against a brute-force recursion.

int brute_cost(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::pair<std::size_t, std::size_t>, int> memo;
  std::function<int(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> int {
    if (i == a.size()) return static_cast<int>(b.size() - j);
    if (j == b.size()) return static_cast<int>(a.size() - i);
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int best = 1 + std::min(go(i + 1, j), go(i, j + 1));
    if (a[i] == b[j]) best = std::min(best, go(i + 1, j + 1));
    return memo[key] = best;
  };
  return go(0, 0);
}

Outcome alignment() {
  Outcome o;
  Rng rng(2024);
  const auto t0 = Clock::now();
  int mismatches = 0;
  for (int n = 0; n < 1000; ++n) {
    const auto alphabet = 1 + rng.below(8);
    auto seq = [&] {
      std::vector<std::string> s(rng.below(13));
      for (auto& x : s) x = std::string(1, static_cast<char>('a' + rng.below(alphabet)));
      return s;
    };
    auto gen = seq();
    auto exp = seq();
    auto script = annotate::edit_script(gen, exp);
    int ops_cost = 0;
    for (const auto& op : script.ops) ops_cost += op.kind != annotate::EditKind::keep;
    bool ok = script.cost == brute_cost(gen, exp) && ops_cost == script.cost &&
              annotate::apply_script(script, gen, exp) == exp;
    mismatches += !ok;
  }
  const double secs = seconds_since(t0);
  o.require(mismatches == 0, std::to_string(mismatches) + " of 1000 pairs disagree");
  o.require(secs < 5.0, "took " + fmt(secs) + " s");
  if (o.pass) o.detail = "1000/1000 pairs match, " + fmt(secs, 3) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// 3. Corrupted teacher answers are always repaired to the expert plan.

Outcome corruption_recovery() {
  Outcome o;
  const auto& eng = engine();
  const auto& tasks = eng.suite().tasks;
  int exact = 0, max_calls = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto& task = tasks[seed % tasks.size()];
    auto split = world::split_variations(task);
    const int v = split.train[(seed / tasks.size()) % split.train.size()];
    Rng rng(seed * 7919 + 1);
    annotate::CorruptionConfig c;
    // Every fourth seed runs at the 30% ceiling on both perturbations.
    c.drop_rate = seed % 4 == 0 ? 0.3 : 0.3 * rng.unit();
    c.insert_rate = seed % 4 == 0 ? 0.3 : 0.3 * rng.unit();
    c.seed = seed;

    annotate::AnnotationInput in;
    in.goal = eng.instantiate(task, v, 0).second;
    in.expert = annotate::action_surfaces(eng.expert_trajectory(task, v));
    in.examples = annotate::select_examples(eng, task, v, split.train);
    in.preamble = annotate::environment_preamble(eng.suite().world.locations);

    annotate::ScriptedOracleTeacher teacher(eng, c);
    try {
      auto out = annotate::annotate(in, teacher, annotate::kDefaultBudget);
      bool ok = annotate::concatenate(out.trajectory.segments) == in.expert;
      exact += ok;
      o.require(ok, "seed " + std::to_string(seed) + " concatenation differs");
    } catch (const Error& e) {
      o.require(false, "seed " + std::to_string(seed) + ": " + e.what());
    }
    max_calls = std::max(max_calls, teacher.calls());
    o.require(teacher.calls() <= 11, "seed " + std::to_string(seed) + " used " + std::to_string(teacher.calls()) +
                                         " teacher calls");
  }
  if (o.pass) o.detail = std::to_string(exact) + "/200 exact, max teacher calls " + std::to_string(max_calls);
  return o;
}

// ---------------------------------------------------------------------------
// 4. Noise ordering for the sub-goal-conditioned scripted agent on the test split.

Outcome noise_ordering() {
  Outcome o;
  const auto& eng = engine();
  eval::EvalConfig base;
  base.split = world::SplitName::test;
  base.agent.kind = eval::AgentKind::scripted;
  const double clean = eval::evaluate(base, eng).overall_avg;
  auto cells = eval::run_ablation_matrix(base, eval::default_noise_grid(base.seed), eng);

  std::map<std::pair<agent::NoiseKind, std::string>, double> score;
  for (const auto& c : cells) score[{c.noise.kind, agent::schedule_label(c.noise.schedule)}] = c.report.overall_avg;
  const double semi = score.at({agent::NoiseKind::semi_random, "each"});
  const double rnd = score.at({agent::NoiseKind::random, "each"});
  o.require(clean - semi >= 10.0, "true " + fmt(clean) + " vs semi_random " + fmt(semi));
  o.require(semi - rnd >= 10.0, "semi_random " + fmt(semi) + " vs random " + fmt(rnd));

  std::ostringstream detail;
  detail << "true " << fmt(clean) << ", semi_random each " << fmt(semi) << ", random each " << fmt(rnd);
  for (auto kind : {agent::NoiseKind::random, agent::NoiseKind::semi_random}) {
    const double first = score.at({kind, "first"});
    const double ten = score.at({kind, "10 steps"});
    const double each = score.at({kind, "each"});
    const std::string name(agent::to_string(kind));
    o.require(first >= ten && ten >= each, name + " first/10/each = " + fmt(first) + "/" + fmt(ten) + "/" + fmt(each));
    detail << "; " << name << " first/10/each " << fmt(first) << "/" << fmt(ten) << "/" << fmt(each);
  }
  if (o.pass) o.detail = detail.str();
  return o;
}

// ---------------------------------------------------------------------------
// 5. Stall and step limits end episodes at exactly the right step.

class ByTime final : public agent::Policy {
 public:
  explicit ByTime(std::function<std::string(int)> fn) : fn_(std::move(fn)) {}
  std::string generate(const std::string& input) const override {
    return fn_(annotate::parse_input(input, annotate::Role::action).time);
  }

 private:
  std::function<std::string(int)> fn_;
};

int last_change(const agent::EpisodeResult& r) {
  int last = 0, score = 0;
  for (const auto& e : r.transcript) {
    if (e.score_after != score) last = e.step + 1;
    score = e.score_after;
  }
  return last;
}

Outcome termination() {
  Outcome o;
  const auto& eng = engine();
  agent::EpisodeLimits limits;
  o.require(limits.max_steps == 100 && limits.stall_window == 50, "default limits changed");
  agent::FixedResponse none("none");
  int stall_runs = 0, step_runs = 0;

  for (const auto& task : eng.suite().tasks) {
    auto expert = annotate::action_surfaces(eng.expert_trajectory(task, 0));
    int task_stalls = 0;
    // Stall: play a prefix of the plan, then idle.
    for (std::size_t k = 0; k < expert.size(); ++k) {
      ByTime act([&](int t) { return static_cast<std::size_t>(t) < k ? expert[static_cast<std::size_t>(t)] : "wait"; });
      auto r = agent::run_episode(eng, task, 0, none, act, limits);
      // Timed processes (boiling, freezing, growth) can finish the task
      // while the agent idles; that run never stalled.
      if (r.termination_reason == world::TerminationReason::task_complete) {
        o.require(r.final_score == 100, task.task_type_id + " prefix " + std::to_string(k) + " completed below 100");
        continue;
      }
      ++task_stalls;
      bool ok = r.termination_reason == world::TerminationReason::stall_limit && r.steps_taken == last_change(r) + 50;
      o.require(ok, task.task_type_id + " prefix " + std::to_string(k) + " ended at " + std::to_string(r.steps_taken) +
                        " (" + std::string(world::to_string(r.termination_reason)) + ")");
      ++stall_runs;
    }
    o.require(task_stalls > 0, task.task_type_id + " never stalled");
    // Step limit: progress late enough that the stall window never closes,
    // and never play the final action.
    const int idle = 45;
    ByTime late([&](int t) {
      auto i = static_cast<std::size_t>(t - idle);
      return t >= idle && i + 1 < expert.size() ? expert[i] : "wait";
    });
    auto r = agent::run_episode(eng, task, 0, none, late, limits);
    if (last_change(r) > 50 && r.final_score < 100) {
      bool ok = r.termination_reason == world::TerminationReason::step_limit && r.steps_taken == 100;
      o.require(ok, task.task_type_id + " late agent ended at " + std::to_string(r.steps_taken));
      ++step_runs;
    }
  }
  // Boundary: one step inside either limit keeps the episode running.
  agent::FixedResponse wait("wait");
  const auto& task = eng.suite().tasks[0];
  auto r49 = agent::run_episode(eng, task, 0, none, wait, agent::EpisodeLimits{49, 50, 1.0});
  o.require(r49.steps_taken == 49 && r49.termination_reason == world::TerminationReason::step_limit,
            "49-step limit ended at " + std::to_string(r49.steps_taken));
  auto r50 = agent::run_episode(eng, task, 0, none, wait, limits);
  o.require(r50.steps_taken == 50 && r50.termination_reason == world::TerminationReason::stall_limit,
            "idle agent ended at " + std::to_string(r50.steps_taken));
  o.require(step_runs >= 1, "no task exercised the step limit");
  if (o.pass) {
    o.detail = std::to_string(stall_runs) + " stall runs exact, " + std::to_string(step_runs) +
               " step-limit runs stopped at 100";
  }
  return o;
}

// ---------------------------------------------------------------------------
// 6. Record round trips and the rendered phrasing.

std::string random_phrase(Rng& rng, std::size_t max_words) {
  static const std::vector<std::string> words{"kitchen", "dove", "red box", "metal pot", "go", "to", "water",
                                              "a", "the", "orange", "greenhouse", "x1", "9", "(on)", "jar,"};
  std::string out;
  for (auto n = 1 + rng.below(max_words); n > 0; --n) out += (out.empty() ? "" : " ") + rng.pick(words);
  return out;
}

SubGoal random_subgoal(Rng& rng) {
  static const std::vector<std::string> names{"navigate_to", "pick_up", "Focus_on", "move", "wait_for", "heat"};
  std::vector<std::string> args;
  static const std::vector<std::string> words{"kitchen", "dove", "red box", "metal pot", "water", "apple seed"};
  for (auto n = rng.below(3); n > 0; --n) args.push_back(rng.pick(words));
  return SubGoal::make(rng.pick(names), args);
}

annotate::StepRecord random_record(Rng& rng) {
  annotate::StepRecord r;
  r.task_type_id = "t";
  r.task_desc = "Your task is to " + random_phrase(rng, 8);
  r.time = static_cast<int>(rng.below(100));
  r.score = static_cast<int>(rng.below(101));
  for (auto n = rng.below(5); n > 0; --n) r.completed_subgoals.push_back(random_subgoal(rng));
  if (rng.below(4) != 0) r.current_subgoal = random_subgoal(rng);
  for (auto n = rng.below(3); n > 0; --n) r.prior_completed.push_back(random_subgoal(rng));
  if (rng.below(3) != 0) r.prior_subgoal = random_subgoal(rng);
  for (auto n = rng.below(annotate::kHistoryWindow + 1); n > 0; --n) {
    int delta = static_cast<int>(rng.below(60)) - 10;
    r.history.push_back({random_phrase(rng, 4), delta, rng.below(3) ? random_phrase(rng, 6) + "." : "N/A"});
  }
  r.room_text = "Current environment: This " + random_phrase(rng, 1) + " location. Here you see: | the agent | " +
                random_phrase(rng, 3) + " |";
  r.inventory_text = "Current inventory: In your inventory, you see: | " + random_phrase(rng, 2) + " |";
  r.visited_text = "Visited rooms: " + random_phrase(rng, 3);
  r.target_action = random_phrase(rng, 4);
  r.target_subgoal = random_subgoal(rng).surface();
  return r;
}

Outcome serialization() {
  Outcome o;
  Rng rng(606);
  int failures = 0;
  for (int n = 0; n < 1000; ++n) {
    auto r = random_record(rng);
    for (auto role : {annotate::Role::action, annotate::Role::subgoal}) {
      auto ser = annotate::serialize_record(r, role);
      try {
        failures += annotate::parse_record(ser.input, role) != annotate::context_for(r, role);
      } catch (const ParseError& e) {
        ++failures;
      }
    }
  }
  o.require(failures == 0, std::to_string(failures) + " of 2000 renders did not round-trip");

  annotate::PromptContext c;
  c.task_desc =
      "Your task is to find a(n) living thing. First, focus on the thing. Then, move it to the red box in the kitchen";
  c.time = 4;
  c.score = 16;
  c.completed = {SubGoal::make("navigate_to", {"greenhouse"}), SubGoal::make("navigate_to", {"outside"})};
  c.current = SubGoal::make("Focus_on", {"dove"});
  c.history = {{"look around", 0, "N/A"},
               {"go to greenhouse", 16, "You move to the greenhouse."},
               {"open door to outside", 0, "The door is already open."},
               {"go to outside", 0, "You move to the outside."}};
  c.room_text = "Current environment: This outside location is called the outside. Here you see: | the agent |";
  c.inventory_text = "Current inventory: In your inventory, you see: | an orange |";
  c.visited_text = "Visited rooms: hallway, greenhouse, outside";
  auto action = annotate::render_input(c, annotate::Role::action);
  auto sub = annotate::render_input(c, annotate::Role::subgoal);
  o.require(action.find("Completed subtasks are:") != std::string::npos, "missing completed phrase");
  o.require(action.find("What action should you do next?") != std::string::npos, "missing action question");
  o.require(sub.find("What subtask should you do next?") != std::string::npos, "missing subtask question");
  o.require(action.find("<extra_id_4> look around (+0) --> N/A |") != std::string::npos &&
                action.find("<extra_id_1> go to outside") != std::string::npos,
            "missing history markers");
  if (o.pass) o.detail = "2000/2000 round trips, worked example phrasing present";
  return o;
}

// ---------------------------------------------------------------------------
// 7. Variation cap, length groups and the macro average.

Outcome protocol() {
  Outcome o;
  auto suite = fixtures::parse(fixtures::suite_with({fixtures::dove_task(44)}));
  world::Engine eng(suite);
  const auto test_ids = world::split_variations(suite->tasks[0]).test;
  eval::EvalConfig cfg;
  cfg.agent.kind = eval::AgentKind::oracle;
  auto report = eval::evaluate(cfg, eng);
  std::vector<int> ran;
  for (const auto& v : report.per_task.at("find-living-thing").per_variation) ran.push_back(v.variation);
  o.require(test_ids.size() > 10, "fixture has only " + std::to_string(test_ids.size()) + " test variations");
  o.require(ran == std::vector<int>(test_ids.begin(), test_ids.begin() + 10), "did not run the first 10 test ids");

  using eval::LengthGroup;
  o.require(eval::classify_length(19) == LengthGroup::short_ && eval::classify_length(20) == LengthGroup::medium &&
                eval::classify_length(50) == LengthGroup::medium && eval::classify_length(51) == LengthGroup::long_,
            "length boundaries wrong");

  // Macro mean on the bundled suite and on random synthetic reports.
  eval::EvalConfig scripted;
  scripted.agent.kind = eval::AgentKind::scripted;
  scripted.agent.noise = agent::parse_noise_spec("semi_random:every10:1");
  std::vector<eval::EvalReport> reports{eval::evaluate(scripted, engine())};
  Rng rng(7);
  for (int n = 0; n < 200; ++n) {
    eval::EvalReport r;
    for (auto t = 1 + rng.below(30); t > 0; --t) {
      eval::TaskReport tr;
      for (auto v = 1 + rng.below(10); v > 0; --v) tr.per_variation.push_back({0, static_cast<int>(rng.below(101))});
      double s = 0;
      for (const auto& v : tr.per_variation) s += v.score;
      tr.avg_score = s / static_cast<double>(tr.per_variation.size());
      tr.expert_length_avg = static_cast<double>(rng.below(90));
      r.per_task["task" + std::to_string(t)] = tr;
    }
    eval::finalize(r);
    reports.push_back(r);
  }
  double worst = 0.0;
  for (const auto& r : reports) {
    double sum = 0.0;
    for (const auto& [_, t] : r.per_task) sum += t.avg_score;
    worst = std::max(worst, std::abs(r.overall_avg - sum / static_cast<double>(r.per_task.size())));
  }
  o.require(worst <= 1e-9, "macro mean off by " + std::to_string(worst));
  if (o.pass) o.detail = "ran the first 10 of " + std::to_string(test_ids.size()) + " test ids, boundaries ok, macro error " +
                          std::to_string(worst);
  return o;
}

// ---------------------------------------------------------------------------
// 8. Repair always lands in the admissible set, at minimal distance.

std::size_t brute_distance(const std::string& a, const std::string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = 1 + std::min(go(i + 1, j), go(i, j + 1));
    best = std::min(best, (a[i] == b[j] ? 0u : 1u) + go(i + 1, j + 1));
    return memo[key] = best;
  };
  return go(0, 0);
}

Outcome repair() {
  Outcome o;
  const auto& eng = engine();
  std::vector<std::vector<world::Action>> states;
  for (const auto& task : eng.suite().tasks) {
    for (int v : {0, 3}) {
      auto s = eng.instantiate(task, v, 0).first;
      for (const auto& step : eng.expert_trajectory(task, v)) {
        states.push_back(eng.admissible_commands(s));
        s = eng.step(s, step.action).first;
      }
    }
  }
  Rng rng(8);
  int outside = 0, identity_fail = 0, identity_checks = 0, distance_fail = 0;
  for (int n = 0; n < 10000; ++n) {
    const auto& adm = rng.pick(states);
    std::string raw;
    if (rng.below(2)) {
      raw = rng.pick(adm).surface;
      for (auto k = rng.below(6); k > 0 && !raw.empty(); --k) raw[rng.below(raw.size())] = static_cast<char>(32 + rng.below(95));
    } else {
      for (auto k = rng.below(40); k > 0; --k) raw += static_cast<char>(32 + rng.below(95));
    }
    auto got = agent::repair_action(raw, adm);
    outside += std::none_of(adm.begin(), adm.end(), [&](const auto& a) { return a.surface == got.surface; });
    if (n < 100) {
      const std::string norm = to_lower(trim(raw));
      std::size_t best = SIZE_MAX;
      for (const auto& a : adm) best = std::min(best, brute_distance(norm, a.surface));
      distance_fail += brute_distance(norm, got.surface) != best;
    }
  }
  for (const auto& adm : states) {
    for (const auto& a : adm) {
      ++identity_checks;
      identity_fail += agent::repair_action(a.surface, adm).surface != a.surface;
    }
  }
  o.require(outside == 0, std::to_string(outside) + " repairs left the admissible set");
  o.require(identity_fail == 0, std::to_string(identity_fail) + " exact commands changed");
  o.require(distance_fail == 0, std::to_string(distance_fail) + " of 100 repairs not minimal");
  if (o.pass) {
    o.detail = "10000 fuzzed inputs admissible, " + std::to_string(identity_checks) +
               " identity checks, 100/100 minimal";
  }
  return o;
}

// ---------------------------------------------------------------------------
// 9. Held-out tasks: sub-goal-conditioned agent transfers, the flat one does not.

Outcome generalization() {
  Outcome o;
  const std::vector<std::string> seen{"find-living-thing", "boil", "use-thermometer", "grow-plant"};
  eval::EvalConfig cfg;
  cfg.split = world::SplitName::test;
  cfg.agent.kind = eval::AgentKind::scripted;
  auto hier = eval::generalization_eval(seen, cfg, engine());
  cfg.agent.kind = eval::AgentKind::flat;
  auto flat = eval::generalization_eval(seen, cfg, engine());
  o.require(hier.unseen_avg > flat.unseen_avg,
            "unseen scripted " + fmt(hier.unseen_avg) + " vs flat " + fmt(flat.unseen_avg));
  if (o.pass) {
    o.detail = "unseen scripted " + fmt(hier.unseen_avg) + " > flat " + fmt(flat.unseen_avg) + " (seen " +
               fmt(hier.seen_avg) + " vs " + fmt(flat.seen_avg) + ")";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"end-to-end oracle pipeline", pipeline},
      {"alignment oracle equivalence", alignment},
      {"corruption recovery", corruption_recovery},
      {"sub-goal noise ordering", noise_ordering},
      {"termination exactness", termination},
      {"record serialization", serialization},
      {"evaluation protocol", protocol},
      {"action repair", repair},
      {"unseen-task generalization", generalization},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " (" << criteria[i].first
              << "): " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
