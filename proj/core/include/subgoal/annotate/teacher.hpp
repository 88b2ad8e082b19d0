#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "subgoal/annotate/types.hpp"
#include "subgoal/common/chat_client.hpp"
#include "subgoal/world/engine.hpp"

namespace subgoal::annotate {

// A teacher answers annotation prompts. Implementations must tolerate
// concurrent complete() calls.
class TeacherBackend {
 public:
  virtual ~TeacherBackend() = default;
  virtual TeacherResponse complete(const TeacherRequest& request) = 0;
};

TeacherResponse teacher_complete(const TeacherRequest& request, TeacherBackend& backend);

// Returns canned responses in order; the last one repeats once exhausted.
class MockTeacher final : public TeacherBackend {
 public:
  explicit MockTeacher(std::vector<std::string> responses);
  TeacherResponse complete(const TeacherRequest& request) override;
  int calls() const;
  std::vector<TeacherRequest> requests() const;

 private:
  std::vector<std::string> responses_;
  mutable std::mutex mu_;
  std::vector<TeacherRequest> requests_;
};

// Perturbations applied by the scripted oracle, all relative to L, the
// number of actions the query asks about.
struct CorruptionConfig {
  double drop_rate = 0.0;             // round(drop_rate * L) actions dropped
  double insert_rate = 0.0;           // round(insert_rate * L) spurious actions inserted
  double keep_prefix_fraction = 1.0;  // answer only covers this leading share of L
  double garbage_rate = 0.0;          // probability of an unparseable reply
  std::uint64_t seed = 0;

  bool noiseless() const {
    return drop_rate == 0.0 && insert_rate == 0.0 && keep_prefix_fraction >= 1.0 && garbage_rate == 0.0;
  }
};

struct GoldEntry {
  std::string task_description;
  std::vector<std::string> actions;
  std::vector<SubGoalSegment> segments;
};

// Builds gold entries for every variation of every task in the suite.
std::vector<GoldEntry> gold_entries(const world::Engine& engine);

// Answers from the suite's gold segmentation. The query's description and
// action list select a gold entry; a query over a contiguous sub-span (as
// sent for gap filling) gets the gold segmentation clipped to that span.
// Unknown queries receive an unparseable reply. Deterministic: the
// corruption draw depends on (seed, query text, how often that query was
// asked before).
class ScriptedOracleTeacher final : public TeacherBackend {
 public:
  ScriptedOracleTeacher(std::vector<GoldEntry> gold, CorruptionConfig corruption = {});
  ScriptedOracleTeacher(const world::Engine& engine, CorruptionConfig corruption = {});

  TeacherResponse complete(const TeacherRequest& request) override;
  int calls() const;

 private:
  std::vector<GoldEntry> gold_;
  CorruptionConfig corruption_;
  mutable std::mutex mu_;
  std::map<std::string, std::uint64_t> asked_;
  int calls_ = 0;
};

// Applies `config` to `gold`; exposed for tests.
std::vector<SubGoalSegment> corrupt_segments(const std::vector<SubGoalSegment>& gold,
                                             const CorruptionConfig& config, std::uint64_t stream);

class RemoteTeacher final : public TeacherBackend {
 public:
  explicit RemoteTeacher(ChatEndpoint endpoint);
  TeacherResponse complete(const TeacherRequest& request) override;

 private:
  ChatClient client_;
};

}  // namespace subgoal::annotate
