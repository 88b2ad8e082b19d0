#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subgoal/annotate/dataset.hpp"
#include "subgoal/annotate/types.hpp"
#include "subgoal/common/chat_client.hpp"

namespace subgoal::agent {

// Text-to-text policy. generate() must be safe to call concurrently; a
// deterministic policy returns the same output for the same input.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string generate(const std::string& input) const = 0;
  virtual bool deterministic() const { return true; }
};

class FixedResponse final : public Policy {
 public:
  explicit FixedResponse(std::string text) : text_(std::move(text)) {}
  std::string generate(const std::string&) const override { return text_; }

 private:
  std::string text_;
};

// Picks an entry by hashing (seed, input): a pure function of its input
// that still looks arbitrary across inputs.
class RandomFromVocabulary final : public Policy {
 public:
  RandomFromVocabulary(std::vector<std::string> vocabulary, std::uint64_t seed);
  std::string generate(const std::string& input) const override;

 private:
  std::vector<std::string> vocabulary_;
  std::uint64_t seed_;
};

// Looks targets up in a dataset. Inputs seen in the dataset return their
// target; anything else falls back to the most similar record of the same
// shape (same task description first, then matching score, room,
// inventory, last action and sub-goal fields, then closest time step).
class ReplayOracle final : public Policy {
 public:
  ReplayOracle(const std::vector<annotate::DatasetRow>& rows, annotate::Role role);
  std::string generate(const std::string& input) const override;
  std::size_t size() const { return targets_.size(); }

 private:
  struct Parsed {
    annotate::PromptContext ctx;
    std::string last_action;
    std::string current;
    std::string completed;
  };
  static Parsed digest(annotate::PromptContext ctx);

  annotate::Role role_;
  std::unordered_map<std::string, std::size_t> exact_;
  std::vector<std::string> targets_;
  std::vector<Parsed> parsed_;
  std::map<std::string, std::vector<std::size_t>> by_task_;
};

// Executes sub-goals with action templates induced from annotated
// segments: `navigate_to(kitchen)` with actions {open door to kitchen, go to
// kitchen} becomes navigate_to/1 -> [open door to $0, go to $0]. Runs of
// "wait" collapse to a repeatable step. The next action continues the
// template after the most recent history action; sub-goals without a known
// template produce "wait".
class SkillExecutor final : public Policy {
 public:
  using Template = std::vector<std::string>;

  static SkillExecutor from_segments(const std::vector<annotate::SubGoalSegment>& segments);
  // Groups consecutive action-role rows of one variation by their current
  // sub-goal.
  static SkillExecutor from_rows(const std::vector<annotate::DatasetRow>& action_rows);
  // Literal variant keyed by the full sub-goal surface: each sub-goal runs
  // exactly the actions of its own gold segment, and any other sub-goal
  // produces "wait".
  static SkillExecutor literal(const std::vector<annotate::SubGoalSegment>& segments);

  std::string generate(const std::string& input) const override;

  // Next action for a sub-goal given the most recent history action.
  std::string next_action(const std::optional<SubGoal>& subgoal, const std::string& last_action) const;

  std::optional<Template> template_for(const std::string& name, std::size_t arity) const;
  std::size_t skill_count() const { return is_literal_ ? literal_.size() : skills_.size(); }

 private:
  std::map<std::pair<std::string, std::size_t>, Template> skills_;
  std::map<std::string, Template> literal_;
  bool is_literal_ = false;
};

// Induced template of one segment; exposed for tests.
SkillExecutor::Template induce_template(const annotate::SubGoalSegment& segment);

// Wraps a sub-goal policy and snaps each generated name to the closest
// known name (character edit distance), keeping the arguments.
class VocabularySnap final : public Policy {
 public:
  VocabularySnap(std::shared_ptr<const Policy> inner, std::vector<std::string> names);
  std::string generate(const std::string& input) const override;

 private:
  std::shared_ptr<const Policy> inner_;
  std::vector<std::string> names_;
};

// Sends the input as a single user message; the trimmed completion is the
// output. Transport failures surface as PolicyError.
class RemotePolicy final : public Policy {
 public:
  explicit RemotePolicy(ChatEndpoint endpoint);
  std::string generate(const std::string& input) const override;

 private:
  std::unique_ptr<ChatClient> client_;
};

// Rewrites action-role rows as if no sub-goal had ever been set, which is
// the input a flat (single-level) agent sees.
std::vector<annotate::DatasetRow> flatten_rows(const std::vector<annotate::DatasetRow>& action_rows);

}  // namespace subgoal::agent
