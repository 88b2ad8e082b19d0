#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "subgoal/agent/episode.hpp"
#include "subgoal/agent/noise.hpp"
#include "subgoal/agent/policy.hpp"
#include "subgoal/annotate/records.hpp"
#include "subgoal/common/errors.hpp"

using namespace subgoal;
using namespace subgoal::agent;

namespace {

const std::vector<std::string> kLocations{"bathroom", "hallway", "kitchen", "outside"};

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

TEST(NoiseSchedule, Firing) {
  auto count = [](const NoiseSchedule& s, int steps) {
    int n = 0;
    for (int t = 0; t < steps; ++t) n += s.fires_at(t);
    return n;
  };
  EXPECT_EQ(count(NoiseSchedule::every_k(10), 25), 3);
  EXPECT_TRUE(NoiseSchedule::every_k(10).fires_at(20));
  EXPECT_FALSE(NoiseSchedule::every_k(10).fires_at(21));
  for (int len : {1, 7, 100}) EXPECT_EQ(count(NoiseSchedule::first_step_only(), len), 1);
  EXPECT_EQ(count(NoiseSchedule::every_step(), 12), 12);
  EXPECT_EQ(count(NoiseSchedule::every_k(1), 12), 12);
  EXPECT_THROW(NoiseSchedule::every_k(0), ConfigError);
}

TEST(NoiseSpec, ParseAndLabels) {
  auto a = parse_noise_spec("random:each:7");
  EXPECT_EQ(a.kind, NoiseKind::random);
  EXPECT_EQ(a.schedule, NoiseSchedule::every_step());
  EXPECT_EQ(a.seed, 7u);
  EXPECT_EQ(noise_label(a), "random/each");
  auto b = parse_noise_spec("semi-random:every10:3");
  EXPECT_EQ(b.kind, NoiseKind::semi_random);
  EXPECT_EQ(b.schedule, NoiseSchedule::every_k(10));
  EXPECT_EQ(noise_label(b), "semi_random/10 steps");
  EXPECT_EQ(parse_noise_spec("semi_random:first:0").schedule, NoiseSchedule::first_step_only());
  EXPECT_EQ(parse_noise_spec("random:5:1").schedule, NoiseSchedule::every_k(5));
  EXPECT_EQ(schedule_label(NoiseSchedule::first_step_only()), "first");
  for (const char* bad : {"", "random", "loud:each:1", "random:sometimes:1", "random:each:x", "random:every0:1"}) {
    EXPECT_THROW(parse_noise_spec(bad), ConfigError) << bad;
  }
}

TEST(NoiseSubgoal, SemiRandomReplacesLocation) {
  SubgoalVocabulary vocab = SubgoalVocabulary::from_subgoals({SubGoal::make("navigate_to", {"kitchen"})});
  NoiseScene scene{kLocations, {"metal pot", "water"}};
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto sg = make_noise_subgoal(NoiseKind::semi_random, SubGoal::make("navigate_to", {"kitchen"}), scene, vocab, seed);
    ASSERT_EQ(sg.name, "navigate_to");
    ASSERT_EQ(sg.args.size(), 1u);
    EXPECT_NE(sg.args[0], "kitchen");
    EXPECT_TRUE(contains(kLocations, sg.args[0]));
    seen.insert(sg.args[0]);
  }
  EXPECT_EQ(seen.size(), kLocations.size() - 1);  // every other location shows up
}

TEST(NoiseSubgoal, SemiRandomReplacesObjectsWithSceneItems) {
  SubgoalVocabulary vocab;
  NoiseScene scene{kLocations, {"metal pot", "water", "stove"}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto sg = make_noise_subgoal(NoiseKind::semi_random, SubGoal::make("move", {"water", "metal pot"}), scene, vocab,
                                 seed);
    EXPECT_EQ(sg.name, "move");
    ASSERT_EQ(sg.args.size(), 2u);
    for (const auto& a : sg.args) EXPECT_TRUE(contains(scene.items, a)) << a;
  }
}

TEST(NoiseSubgoal, RandomWithSingleEntry) {
  auto only = SubGoal::make("focus_on", {"dove"});
  auto vocab = SubgoalVocabulary::from_subgoals({only});
  NoiseScene scene{kLocations, {"rock"}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(make_noise_subgoal(NoiseKind::random, SubGoal::make("wait"), scene, vocab, seed), only);
  }
}

TEST(NoiseSubgoal, RandomDrawsFromVocabulary) {
  auto vocab = SubgoalVocabulary::from_subgoals({SubGoal::make("navigate_to", {"kitchen"}),
                                                 SubGoal::make("pick_up", {"cup"}),
                                                 SubGoal::make("move", {"cup", "box"})});
  EXPECT_EQ(vocab.names.size(), 3u);
  EXPECT_EQ(vocab.args, (std::vector<std::string>{"box", "cup", "kitchen"}));
  NoiseScene scene{kLocations, {}};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto sg = make_noise_subgoal(NoiseKind::random, std::nullopt, scene, vocab, seed);
    auto it = std::find(vocab.names.begin(), vocab.names.end(), std::make_pair(sg.name, sg.args.size()));
    ASSERT_NE(it, vocab.names.end()) << sg.surface();
    for (const auto& a : sg.args) EXPECT_TRUE(contains(vocab.args, a));
  }
}

TEST(NoiseSubgoal, EmptyVocabularyIsConfigError) {
  EXPECT_THROW(make_noise_subgoal(NoiseKind::random, std::nullopt, NoiseScene{kLocations, {}}, {}, 1), ConfigError);
}

TEST(NoiseSubgoal, SameSeedSameNoise) {
  auto vocab = SubgoalVocabulary::from_subgoals({SubGoal::make("navigate_to", {"kitchen"}),
                                                 SubGoal::make("pick_up", {"cup"})});
  NoiseScene scene{kLocations, {"cup", "pot"}};
  NoiseSpec spec{NoiseKind::random, NoiseSchedule::every_step(), 5};
  std::vector<std::string> a, b;
  for (int t = 0; t < 30; ++t) {
    auto seed = noise_step_seed(spec, "task", t);
    a.push_back(make_noise_subgoal(spec.kind, std::nullopt, scene, vocab, seed).surface());
    b.push_back(make_noise_subgoal(spec.kind, std::nullopt, scene, vocab, seed).surface());
  }
  EXPECT_EQ(a, b);
  EXPECT_NE(std::set<std::string>(a.begin(), a.end()).size(), 1u);
  EXPECT_NE(noise_step_seed(spec, "task", 0), noise_step_seed(NoiseSpec{spec.kind, spec.schedule, 6}, "task", 0));
}

TEST(NoiseScene, ItemsFromPrompt) {
  annotate::PromptContext c;
  c.task_desc = "t";
  c.room_text =
      "Current environment: This outside location is called the outside. Here you see: | the agent | a substance "
      "called water | a fountain (containing a coin, a substance called air) | an apple seed (in the seedling stage) | "
      "You also see: | A door to the kitchen |";
  c.inventory_text = "Current inventory: In your inventory, you see: | a stove (which is turned off) |";
  c.visited_text = "Visited rooms: outside";
  auto items = scene_items_from_prompt(annotate::render_input(c, annotate::Role::subgoal), annotate::Role::subgoal);
  EXPECT_EQ(items, (std::vector<std::string>{"water", "fountain", "coin", "air", "apple seed", "stove"}));
}

TEST(NoisyPolicy, ReplacesOnlyScheduledSteps) {
  auto inner = std::make_shared<FixedResponse>("navigate_to(kitchen)");
  auto vocab = SubgoalVocabulary::from_subgoals({SubGoal::make("navigate_to", {"kitchen"})});
  auto noisy = wrap_policy_with_noise(inner, NoiseSpec{NoiseKind::semi_random, NoiseSchedule::every_k(3), 1}, vocab,
                                      kLocations);
  annotate::PromptContext c;
  c.task_desc = "t";
  c.room_text = "Current environment: This kitchen location is called the kitchen. Here you see: | the agent |";
  c.inventory_text = "Current inventory: In your inventory, you see: | nothing |";
  c.visited_text = "Visited rooms: kitchen";
  for (int t = 0; t < 7; ++t) {
    c.time = t;
    auto out = noisy->generate(annotate::render_input(c, annotate::Role::subgoal));
    if (t % 3 == 0) {
      EXPECT_NE(out, "navigate_to(kitchen)") << t;
      EXPECT_TRUE(starts_with(out, "navigate_to("));
    } else {
      EXPECT_EQ(out, "navigate_to(kitchen)");
    }
  }
  EXPECT_THROW(noisy->generate("not a prompt"), PolicyError);
}

TEST(NoisyEpisode, EveryTenStepsOverTwentyFiveSteps) {
  auto suite = fixtures::parse(fixtures::suite_with({fixtures::dove_task()}));
  world::Engine engine(suite);
  FixedResponse sg("navigate_to(kitchen)");
  FixedResponse act("wait");
  EpisodeNoise noise{NoiseSpec{NoiseKind::semi_random, NoiseSchedule::every_k(10), 3},
                     SubgoalVocabulary::from_subgoals({SubGoal::make("navigate_to", {"kitchen"})})};
  EpisodeLimits limits{25, 50, 1.0};
  auto r = run_episode(engine, suite->tasks[0], 0, sg, act, limits, &noise);
  EXPECT_EQ(r.steps_taken, 25);
  EXPECT_EQ(r.noise_injections(), 3);
  EXPECT_TRUE(r.transcript[0].noise_injected);
  EXPECT_TRUE(r.transcript[10].noise_injected);
  EXPECT_TRUE(r.transcript[20].noise_injected);

  noise.spec.schedule = NoiseSchedule::first_step_only();
  EXPECT_EQ(run_episode(engine, suite->tasks[0], 0, sg, act, limits, &noise).noise_injections(), 1);

  // Same spec and seed, same injected sub-goals.
  noise.spec.schedule = NoiseSchedule::every_step();
  auto x = run_episode(engine, suite->tasks[0], 0, sg, act, limits, &noise);
  auto y = run_episode(engine, suite->tasks[0], 0, sg, act, limits, &noise);
  ASSERT_EQ(x.transcript.size(), y.transcript.size());
  for (std::size_t i = 0; i < x.transcript.size(); ++i) EXPECT_EQ(x.transcript[i].subgoal, y.transcript[i].subgoal);
}
