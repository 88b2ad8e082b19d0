#include "subgoal/annotate/teacher.hpp"

#include <algorithm>
#include <cmath>

#include "subgoal/annotate/prompt.hpp"
#include "subgoal/common/errors.hpp"
#include "subgoal/common/rng.hpp"

namespace subgoal::annotate {

namespace {

constexpr std::string_view kGarbage = "I am not able to split this trajectory into sub-tasks.";

int scaled(double rate, std::size_t n) {
  return static_cast<int>(std::lround(rate * static_cast<double>(n)));
}

// Gold segmentation restricted to actions [first, first + count).
std::vector<SubGoalSegment> clip(const std::vector<SubGoalSegment>& gold, std::size_t first, std::size_t count) {
  std::vector<SubGoalSegment> out;
  std::size_t pos = 0;
  for (const auto& seg : gold) {
    SubGoalSegment part{seg.subgoal, {}};
    for (const auto& a : seg.actions) {
      if (pos >= first && pos < first + count) part.actions.push_back(a);
      ++pos;
    }
    if (!part.actions.empty()) out.push_back(std::move(part));
  }
  return out;
}

}  // namespace

TeacherResponse teacher_complete(const TeacherRequest& request, TeacherBackend& backend) {
  return backend.complete(request);
}

MockTeacher::MockTeacher(std::vector<std::string> responses) : responses_(std::move(responses)) {
  if (responses_.empty()) throw ConfigError("mock teacher needs at least one response");
}

TeacherResponse MockTeacher::complete(const TeacherRequest& request) {
  std::lock_guard lock(mu_);
  requests_.push_back(request);
  std::size_t i = std::min(requests_.size() - 1, responses_.size() - 1);
  return {responses_[i]};
}

int MockTeacher::calls() const {
  std::lock_guard lock(mu_);
  return static_cast<int>(requests_.size());
}

std::vector<TeacherRequest> MockTeacher::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::vector<GoldEntry> gold_entries(const world::Engine& engine) {
  std::vector<GoldEntry> out;
  for (const auto& task : engine.suite().tasks) {
    for (std::size_t v = 0; v < task.variations.size(); ++v) {
      auto plan = engine.expert_trajectory(task, static_cast<int>(v));
      out.push_back({task.variations[v].goal_text, action_surfaces(plan), gold_segments(plan)});
    }
  }
  return out;
}

std::vector<SubGoalSegment> corrupt_segments(const std::vector<SubGoalSegment>& gold,
                                             const CorruptionConfig& config, std::uint64_t stream) {
  Rng rng(mix_seed({config.seed, stream}));
  const auto all = concatenate(gold);
  const std::size_t total = all.size();

  auto segments = gold;
  if (config.keep_prefix_fraction < 1.0) {
    auto keep = static_cast<std::size_t>(std::max(0, scaled(config.keep_prefix_fraction, total)));
    segments = clip(gold, 0, keep);
  }

  // Drop distinct positions, chosen by a partial shuffle of all indices.
  std::size_t present = concatenate(segments).size();
  int drops = std::min<int>(scaled(config.drop_rate, total), static_cast<int>(present));
  if (drops > 0) {
    std::vector<std::size_t> idx(present);
    for (std::size_t i = 0; i < present; ++i) idx[i] = i;
    rng.shuffle(idx);
    std::vector<bool> dropped(present, false);
    for (int k = 0; k < drops; ++k) dropped[idx[static_cast<std::size_t>(k)]] = true;
    std::size_t pos = 0;
    for (auto& seg : segments) {
      std::vector<std::string> kept;
      for (auto& a : seg.actions) {
        if (!dropped[pos++]) kept.push_back(std::move(a));
      }
      seg.actions = std::move(kept);
    }
  }

  int inserts = scaled(config.insert_rate, total);
  for (int k = 0; k < inserts && !segments.empty(); ++k) {
    std::string spurious = (total > 0 && rng.below(2) == 0) ? all[rng.below(total)] : "look around";
    auto& seg = segments[rng.below(segments.size())];
    auto at = rng.below(seg.actions.size() + 1);
    seg.actions.insert(seg.actions.begin() + static_cast<std::ptrdiff_t>(at), std::move(spurious));
  }
  return segments;
}

ScriptedOracleTeacher::ScriptedOracleTeacher(std::vector<GoldEntry> gold, CorruptionConfig corruption)
    : gold_(std::move(gold)), corruption_(corruption) {}

ScriptedOracleTeacher::ScriptedOracleTeacher(const world::Engine& engine, CorruptionConfig corruption)
    : ScriptedOracleTeacher(gold_entries(engine), corruption) {}

int ScriptedOracleTeacher::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

TeacherResponse ScriptedOracleTeacher::complete(const TeacherRequest& request) {
  std::uint64_t nth = 0;
  {
    std::lock_guard lock(mu_);
    ++calls_;
    nth = asked_[request.query]++;
  }
  PromptExample query;
  try {
    query = parse_query_block(request.query);
  } catch (const ParseError&) {
    return {std::string(kGarbage)};
  }

  const GoldEntry* found = nullptr;
  std::size_t first = 0;
  for (const auto& g : gold_) {
    if (g.task_description == query.task_description && g.actions == query.actions) {
      found = &g;
      break;
    }
  }
  if (!found && !query.actions.empty()) {
    for (const auto& g : gold_) {
      if (g.task_description != query.task_description) continue;
      auto it = std::search(g.actions.begin(), g.actions.end(), query.actions.begin(), query.actions.end());
      if (it != g.actions.end()) {
        found = &g;
        first = static_cast<std::size_t>(it - g.actions.begin());
        break;
      }
    }
  }
  if (!found) return {std::string(kGarbage)};

  auto segments = clip(found->segments, first, query.actions.size());
  if (corruption_.noiseless()) return {render_segments(segments)};

  const std::uint64_t stream = mix_seed({fnv1a(request.query), nth});
  Rng gate(mix_seed({corruption_.seed, stream, 0x9a7bULL}));
  if (gate.unit() < corruption_.garbage_rate) return {std::string(kGarbage)};
  return {render_segments(corrupt_segments(segments, corruption_, stream))};
}

RemoteTeacher::RemoteTeacher(ChatEndpoint endpoint) : client_(std::move(endpoint)) {}

TeacherResponse RemoteTeacher::complete(const TeacherRequest& request) {
  return {client_.complete(prompt_messages(request))};
}

}  // namespace subgoal::annotate
