#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subgoal/agent/policy.hpp"
#include "subgoal/annotate/dataset.hpp"
#include "subgoal/common/subgoal.hpp"

namespace subgoal::agent {

enum class NoiseKind { random, semi_random };

struct NoiseSchedule {
  enum class Mode { first_step_only, every_k, every_step };
  Mode mode = Mode::every_step;
  int k = 10;

  static NoiseSchedule first_step_only() { return {Mode::first_step_only, 1}; }
  static NoiseSchedule every_k(int k);  // throws ConfigError for k < 1
  static NoiseSchedule every_step() { return {Mode::every_step, 1}; }

  bool fires_at(int step) const;
  friend bool operator==(const NoiseSchedule&, const NoiseSchedule&) = default;
};

struct NoiseSpec {
  NoiseKind kind = NoiseKind::random;
  NoiseSchedule schedule;
  std::uint64_t seed = 0;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

std::string_view to_string(NoiseKind kind);
// "first", "10 steps", "each" (or "<k> steps").
std::string schedule_label(const NoiseSchedule& schedule);
// "random/each", "semi_random/10 steps", ...
std::string noise_label(const NoiseSpec& spec);

// Parses "kind:schedule:seed" where schedule is first, each, every<k> or a
// bare k. Throws ConfigError on malformed input.
NoiseSpec parse_noise_spec(std::string_view text);

// Sub-goal names (with arity) and arguments seen in training targets.
struct SubgoalVocabulary {
  std::vector<std::pair<std::string, std::size_t>> names;
  std::vector<std::string> args;

  bool empty() const { return names.empty(); }
  // Sorted, deduplicated vocabulary of call-form sub-goal strings.
  static SubgoalVocabulary from_subgoals(const std::vector<SubGoal>& subgoals);
  static SubgoalVocabulary from_rows(const std::vector<annotate::DatasetRow>& subgoal_rows);
};

// What the semi-random source may substitute: the engine's location list
// and the items currently in the room or the inventory.
struct NoiseScene {
  std::vector<std::string> locations;
  std::vector<std::string> items;
};

// Random draws a name of the vocabulary and fills every argument from the
// argument pool. Semi-random keeps the proposed name and replaces each
// argument: locations with a different location, anything else with one of
// the scene's items. Throws ConfigError when random noise has no vocabulary.
SubGoal make_noise_subgoal(NoiseKind kind, const std::optional<SubGoal>& proposed, const NoiseScene& scene,
                           const SubgoalVocabulary& vocabulary, std::uint64_t seed);

// Per-step seed shared by every noise kind so cells of an ablation grid are
// paired.
std::uint64_t noise_step_seed(const NoiseSpec& spec, std::string_view task_desc, int step);

// Items listed in the room and inventory panels of a policy input, with
// articles and state suffixes stripped. Nested contents are included.
std::vector<std::string> scene_items_from_prompt(std::string_view input, annotate::Role role);

// Sub-goal policy wrapper that replaces the inner output at the steps the
// schedule selects. The step and scene are read back from the prompt, so it
// can wrap any sub-goal policy.
class NoisyPolicy final : public Policy {
 public:
  NoisyPolicy(std::shared_ptr<const Policy> inner, NoiseSpec spec, SubgoalVocabulary vocabulary,
              std::vector<std::string> locations);
  std::string generate(const std::string& input) const override;

 private:
  std::shared_ptr<const Policy> inner_;
  NoiseSpec spec_;
  SubgoalVocabulary vocabulary_;
  std::vector<std::string> locations_;
};

std::shared_ptr<const Policy> wrap_policy_with_noise(std::shared_ptr<const Policy> subgoal_policy, const NoiseSpec& spec,
                                                     SubgoalVocabulary vocabulary, std::vector<std::string> locations);

}  // namespace subgoal::agent
