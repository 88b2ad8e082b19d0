#include <gtest/gtest.h>

#include <functional>
#include <map>

#include "fixtures.hpp"
#include "subgoal/agent/repair.hpp"
#include "subgoal/common/errors.hpp"
#include "subgoal/common/rng.hpp"
#include "subgoal/common/text.hpp"

using namespace subgoal;
using subgoal::agent::repair_action;
using world::Action;

namespace {

std::vector<Action> actions(std::initializer_list<const char*> surfaces) {
  std::vector<Action> out;
  for (const char* s : surfaces) {
    Action a;
    a.surface = s;
    out.push_back(a);
  }
  return out;
}

// Unit-cost edit distance by memoized recursion.
std::size_t oracle_distance(const std::string& a, const std::string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = 1 + std::min(go(i + 1, j), go(i, j + 1));
    best = std::min(best, (a[i] == b[j] ? 0 : 1) + go(i + 1, j + 1));
    return memo[key] = best;
  };
  return go(0, 0);
}

}  // namespace

TEST(Repair, ExactMatchIsIdentity) {
  auto adm = actions({"go to hallway", "go to kitchen"});
  EXPECT_EQ(repair_action("go to kitchen", adm).surface, "go to kitchen");
  EXPECT_EQ(repair_action("  Go To KITCHEN ", adm).surface, "go to kitchen");
}

TEST(Repair, ClosestByCharacterDistance) {
  auto adm = actions({"go to hallway", "go to kitchen"});
  EXPECT_EQ(repair_action("goto kitchen", adm).surface, "go to kitchen");
  EXPECT_EQ(repair_action("go to hallwya", adm).surface, "go to hallway");
}

TEST(Repair, TiesGoToSmallestSurface) {
  auto adm = actions({"look at b", "look at a"});
  EXPECT_EQ(repair_action("look at c", adm).surface, "look at a");
}

TEST(Repair, GarbageStillMapsToAdmissible) {
  auto adm = actions({"wait", "look around"});
  auto out = repair_action("asdf", adm);
  EXPECT_TRUE(out.surface == "wait" || out.surface == "look around");
  EXPECT_EQ(out.surface, "wait");  // distance 4 vs 10
}

TEST(Repair, EmptyListIsPrecondition) { EXPECT_THROW(repair_action("wait", {}), PreconditionError); }

TEST(Repair, AgreesWithBruteForceOnEngineStates) {
  const auto& engine = fixtures::bundled_engine();
  Rng rng(77);
  int checked = 0;
  for (const auto& task : engine.suite().tasks) {
    auto plan = engine.expert_trajectory(task, 0);
    auto s = engine.instantiate(task, 0, 0).first;
    for (const auto& step : plan) {
      auto adm = engine.admissible_commands(s);
      // Mutate a real command a little so the nearest neighbour is non-trivial.
      std::string raw = rng.pick(adm).surface;
      for (auto n = rng.below(4); n > 0 && !raw.empty(); --n) {
        auto at = rng.below(raw.size());
        raw[at] = static_cast<char>('a' + rng.below(26));
      }
      auto got = repair_action(raw, adm);
      std::size_t best = SIZE_MAX;
      std::string best_surface;
      for (const auto& a : adm) {
        auto d = oracle_distance(to_lower(trim(raw)), a.surface);
        if (d < best || (d == best && a.surface < best_surface)) {
          best = d;
          best_surface = a.surface;
        }
      }
      EXPECT_EQ(got.surface, best_surface) << raw;
      ++checked;
      s = engine.step(s, step.action).first;
    }
  }
  EXPECT_GE(checked, 100);
}
