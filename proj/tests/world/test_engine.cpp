#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "subgoal/common/errors.hpp"
#include "subgoal/common/rng.hpp"

using namespace subgoal;
using namespace subgoal::world;

namespace {

struct DoveWorld {
  std::shared_ptr<const TaskSuite> suite = fixtures::parse(fixtures::suite_with({fixtures::dove_task()}));
  Engine engine{suite};
  const TaskSpec& task = suite->tasks[0];

  EnvState start() const { return engine.instantiate(task, 0, 0).first; }

  EnvState run(EnvState s, const std::vector<std::string>& actions) const {
    for (const auto& a : actions) s = engine.step(s, a).first;
    return s;
  }
};

bool has_surface(const std::vector<Action>& actions, const std::string& surface) {
  return std::any_of(actions.begin(), actions.end(), [&](const Action& a) { return a.surface == surface; });
}

}  // namespace

TEST(Engine, InstantiateIsDeterministic) {
  const auto& engine = fixtures::bundled_engine();
  for (const auto& task : engine.suite().tasks) {
    auto a = engine.instantiate(task, 3, 42);
    auto b = engine.instantiate(task, 3, 42);
    EXPECT_EQ(a.first, b.first) << task.task_type_id;
    EXPECT_EQ(a.second, b.second);
  }
}

TEST(Engine, GoalTextNamesTheVariationContainer) {
  const auto& engine = fixtures::bundled_engine();
  const auto& task = engine.suite().task("find-living-thing");
  auto [state, goal] = engine.instantiate(task, 0, 0);
  const auto& box = task.variations[0].params.at("box");
  EXPECT_NE(goal.text.str().find(box), std::string::npos) << goal.text.str();
  EXPECT_EQ(goal.task_type_id, "find-living-thing");
}

TEST(Engine, VariationOutOfRange) {
  const auto& engine = fixtures::bundled_engine();
  const auto& task = engine.suite().tasks[0];
  EXPECT_THROW(engine.instantiate(task, static_cast<int>(task.variations.size()), 0), RangeError);
  EXPECT_THROW(engine.instantiate(task, -1, 0), RangeError);
}

TEST(Engine, GoToAdjacentRoom) {
  DoveWorld w;
  auto s = w.run(w.start(), {"open door to greenhouse", "go to greenhouse", "open door to outside", "go to outside",
                             "open door to kitchen"});
  auto [next, obs] = w.engine.step(s, "go to kitchen");
  EXPECT_EQ(next.agent_location, "kitchen");
  EXPECT_EQ(obs.text.str(), "You move to the kitchen.");
  EXPECT_EQ(next.visited_rooms, (std::vector<std::string>{"hallway", "greenhouse", "outside", "kitchen"}));
}

TEST(Engine, WrongFocusFailsWithZero) {
  DoveWorld w;
  auto s = w.run(w.start(), {"open door to greenhouse", "go to greenhouse", "open door to outside", "go to outside"});
  ASSERT_EQ(s.cumulative_score, 20);
  auto [next, obs] = w.engine.step(s, "focus on fountain");
  EXPECT_TRUE(obs.done);
  EXPECT_EQ(obs.score_after, 0);
  EXPECT_EQ(obs.termination_reason, TerminationReason::wrong_focus);
  EXPECT_TRUE(next.done);
}

TEST(Engine, WaitOnlyAdvancesStepCount) {
  DoveWorld w;
  auto s = w.start();
  auto [next, obs] = w.engine.step(s, "wait");
  EXPECT_EQ(obs.score_delta, 0);
  EXPECT_FALSE(obs.done);
  EXPECT_EQ(next.step_count, s.step_count + 1);
  next.step_count = s.step_count;
  EXPECT_EQ(next, s);
}

TEST(Engine, UnparseableActionIsAnObservation) {
  DoveWorld w;
  auto s = w.start();
  for (const char* bad : {"dance wildly", "go to foundry", "pick up dove", ""}) {
    auto [next, obs] = w.engine.step(s, bad);
    EXPECT_EQ(obs.text.str(), kUnparseable) << bad;
    EXPECT_EQ(obs.score_delta, 0);
    EXPECT_EQ(next.step_count, 1);
  }
}

TEST(Engine, ClosedDoorRule) {
  DoveWorld w;
  auto s = w.start();
  auto cmds = w.engine.admissible_commands(s);
  EXPECT_TRUE(has_surface(cmds, "look around"));
  EXPECT_TRUE(has_surface(cmds, "wait"));
  EXPECT_TRUE(has_surface(cmds, "open door to greenhouse"));
  EXPECT_FALSE(has_surface(cmds, "go to greenhouse"));
  s = w.run(s, {"open door to greenhouse"});
  cmds = w.engine.admissible_commands(s);
  EXPECT_TRUE(has_surface(cmds, "go to greenhouse"));
  EXPECT_TRUE(std::is_sorted(cmds.begin(), cmds.end(),
                             [](const Action& a, const Action& b) { return a.surface < b.surface; }));
}

TEST(Engine, ActionSurfacesAreDeterministicRenderings) {
  DoveWorld w;
  auto s = w.run(w.start(), {"open door to greenhouse", "go to greenhouse", "open door to outside", "go to outside"});
  for (const auto& a : w.engine.admissible_commands(s)) {
    EXPECT_EQ(render_action(a.verb, a.args), a.surface);
    auto parsed = w.engine.parse_action(s, a.surface);
    ASSERT_TRUE(parsed) << a.surface;
    EXPECT_EQ(*parsed, a);
  }
}

// Random walks over every task; at each visited state every admissible
// command must execute without the unparseable path, and the score must
// respect its bounds.
TEST(Engine, AdmissibilitySoundnessOnSampledStates) {
  const auto& engine = fixtures::bundled_engine();
  Rng rng(1234);
  int sampled = 0;
  while (sampled < 1000) {
    const auto& task = engine.suite().tasks[rng.below(engine.suite().tasks.size())];
    int v = static_cast<int>(rng.below(task.variations.size()));
    auto s = engine.instantiate(task, v, rng.next()).first;
    for (int depth = 0; depth < 40 && !s.done && sampled < 1000; ++depth, ++sampled) {
      auto cmds = engine.admissible_commands(s);
      ASSERT_FALSE(cmds.empty());
      for (const auto& a : cmds) {
        auto [next, obs] = engine.step(s, a);
        ASSERT_NE(obs.text.str(), kUnparseable) << task.task_type_id << " " << a.surface;
        ASSERT_GE(obs.score_after, 0);
        ASSERT_LE(obs.score_after, 100);
        if (obs.score_delta < 0) {
          ASSERT_EQ(obs.termination_reason, TerminationReason::wrong_focus);
        }
        ASSERT_EQ(obs.done, obs.termination_reason != TerminationReason::none);
        ASSERT_TRUE(next.rooms.count(next.agent_location));
      }
      // Random walks rarely solve a task; skip focus commands so the walk
      // explores instead of ending on a wrong focus.
      std::vector<Action> moves;
      for (const auto& a : cmds) {
        if (a.verb != Verb::focus_on) moves.push_back(a);
      }
      auto visited_before = s.visited_rooms;
      s = engine.step(s, rng.pick(moves)).first;
      ASSERT_TRUE(std::equal(visited_before.begin(), visited_before.end(), s.visited_rooms.begin()));
    }
  }
}

TEST(Engine, ExpertReplayReachesHundredEverywhere) {
  const auto& engine = fixtures::bundled_engine();
  for (const auto& task : engine.suite().tasks) {
    for (const auto& var : task.variations) {
      auto plan = engine.expert_trajectory(task, var.id);
      auto s = engine.instantiate(task, var.id, 0).first;
      int last = s.cumulative_score;
      for (std::size_t i = 0; i < plan.size(); ++i) {
        auto [next, obs] = engine.step(s, plan[i].action);
        EXPECT_GE(obs.score_after, last);
        EXPECT_EQ(obs.score_after, plan[i].score_after);
        EXPECT_EQ(obs.done, i + 1 == plan.size()) << task.task_type_id << " " << var.id << " step " << i;
        last = obs.score_after;
        s = std::move(next);
      }
      EXPECT_EQ(s.cumulative_score, 100) << task.task_type_id << " " << var.id;
      EXPECT_EQ(s.termination, TerminationReason::task_complete);
    }
  }
}

TEST(Engine, ExpertEndsWithMoveIntoContainer) {
  const auto& engine = fixtures::bundled_engine();
  const auto& task = engine.suite().task("find-living-thing");
  auto plan = engine.expert_trajectory(task, 0);
  const auto& p = task.variations[0].params;
  EXPECT_EQ(plan.back().action.surface, "move " + p.at("thing") + " to " + p.at("box"));
  EXPECT_EQ(plan.back().score_after, 100);
}

TEST(Engine, ExpertLengthsSpanTheLengthGroups) {
  const auto& engine = fixtures::bundled_engine();
  double shortest = 1e9, longest = 0;
  for (const auto& task : engine.suite().tasks) {
    double sum = 0;
    for (const auto& v : task.variations) sum += static_cast<double>(engine.expert_trajectory(task, v.id).size());
    double mean = sum / static_cast<double>(task.variations.size());
    shortest = std::min(shortest, mean);
    longest = std::max(longest, mean);
  }
  EXPECT_LT(shortest, 20.0);
  EXPECT_GT(longest, 50.0);
}

TEST(Engine, DoveExpertPlan) {
  DoveWorld w;
  auto plan = w.engine.expert_trajectory(w.task, 0);
  std::vector<std::string> surfaces;
  std::vector<std::string> subgoals;
  for (const auto& step : plan) {
    surfaces.push_back(step.action.surface);
    subgoals.push_back(step.subgoal.surface());
  }
  EXPECT_EQ(surfaces, (std::vector<std::string>{"open door to greenhouse", "go to greenhouse", "open door to outside",
                                                "go to outside", "focus on dove", "pick up dove",
                                                "open door to kitchen", "go to kitchen", "move dove to red box"}));
  EXPECT_EQ(subgoals[4], "Focus_on(dove)");
  EXPECT_EQ(plan[3].segment, 1u);
  EXPECT_EQ(plan[8].segment, 5u);
}

TEST(Engine, SameActionsSameObservations) {
  const auto& engine = fixtures::bundled_engine();
  for (const auto& task : engine.suite().tasks) {
    auto plan = engine.expert_trajectory(task, 5);
    auto a = engine.instantiate(task, 5, 9).first;
    auto b = engine.instantiate(task, 5, 9).first;
    for (const auto& step : plan) {
      auto [na, oa] = engine.step(a, step.action.surface);
      auto [nb, ob] = engine.step(b, step.action.surface);
      ASSERT_EQ(oa.text.str(), ob.text.str());
      ASSERT_EQ(oa.score_after, ob.score_after);
      ASSERT_EQ(na, nb);
      a = std::move(na);
      b = std::move(nb);
    }
  }
}

TEST(Render, EmptyInventory) {
  DoveWorld w;
  EXPECT_EQ(render_inventory(w.start()), "Current inventory: In your inventory, you see: | nothing |");
}

TEST(Render, RoomListing) {
  DoveWorld w;
  auto s = w.run(w.start(), {"open door to greenhouse", "go to greenhouse", "open door to outside", "go to outside"});
  auto room = render_room(s);
  EXPECT_EQ(room,
            "Current environment: This outside location is called the outside. Here you see: | the agent | the "
            "ground | a substance called water | a fountain (containing a coin) | a dove | You also see: | A door "
            "to the foundry | A door to the greenhouse | A door to the kitchen |");
  EXPECT_NE(room.find("| the agent |"), std::string::npos);
  EXPECT_NE(room.find("| a substance called water |"), std::string::npos);
}

TEST(Render, VisitedRooms) {
  DoveWorld w;
  EXPECT_EQ(render_visited(w.start()), "Visited rooms: hallway");
  auto s = w.run(w.start(), {"open door to greenhouse", "go to greenhouse"});
  EXPECT_EQ(render_visited(s), "Visited rooms: hallway, greenhouse");
}

TEST(Render, InventoryAfterPickUp) {
  DoveWorld w;
  auto s = w.run(w.start(), {"open door to greenhouse", "go to greenhouse", "open door to outside", "go to outside",
                             "focus on dove", "pick up dove"});
  EXPECT_EQ(render_inventory(s), "Current inventory: In your inventory, you see: | a dove |");
  auto visible = w.engine.visible_objects(s);
  EXPECT_EQ(visible.back(), "dove");
  EXPECT_TRUE(std::find(visible.begin(), visible.end(), "coin") != visible.end());
}
