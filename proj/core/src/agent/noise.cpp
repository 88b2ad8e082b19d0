#include "subgoal/agent/noise.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "subgoal/annotate/records.hpp"
#include "subgoal/common/errors.hpp"
#include "subgoal/common/rng.hpp"
#include "subgoal/common/text.hpp"

namespace subgoal::agent {

NoiseSchedule NoiseSchedule::every_k(int k) {
  if (k < 1) throw ConfigError("noise schedule every_k needs k >= 1, got " + std::to_string(k));
  return {Mode::every_k, k};
}

bool NoiseSchedule::fires_at(int step) const {
  switch (mode) {
    case Mode::first_step_only: return step == 0;
    case Mode::every_k: return step % k == 0;
    case Mode::every_step: return true;
  }
  return false;
}

std::string_view to_string(NoiseKind kind) { return kind == NoiseKind::random ? "random" : "semi_random"; }

std::string schedule_label(const NoiseSchedule& schedule) {
  switch (schedule.mode) {
    case NoiseSchedule::Mode::first_step_only: return "first";
    case NoiseSchedule::Mode::every_k: return std::to_string(schedule.k) + " steps";
    case NoiseSchedule::Mode::every_step: return "each";
  }
  return "each";
}

std::string noise_label(const NoiseSpec& spec) {
  return std::string(to_string(spec.kind)) + "/" + schedule_label(spec.schedule);
}

namespace {

int parse_int(std::string_view text, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("noise spec: " + std::string(what) + " '" + std::string(text) + "' is not an integer");
  }
  return v;
}

}  // namespace

NoiseSpec parse_noise_spec(std::string_view text) {
  auto parts = split(text, ":");
  if (parts.size() != 3) throw ConfigError("noise spec '" + std::string(text) + "' must look like kind:schedule:seed");
  NoiseSpec spec;
  const std::string kind = to_lower(trim(parts[0]));
  if (kind == "random") {
    spec.kind = NoiseKind::random;
  } else if (kind == "semi_random" || kind == "semi-random" || kind == "semi") {
    spec.kind = NoiseKind::semi_random;
  } else {
    throw ConfigError("noise kind '" + kind + "' is not random or semi_random");
  }
  const std::string sched = to_lower(trim(parts[1]));
  if (sched == "first") {
    spec.schedule = NoiseSchedule::first_step_only();
  } else if (sched == "each") {
    spec.schedule = NoiseSchedule::every_step();
  } else if (starts_with(sched, "every")) {
    spec.schedule = NoiseSchedule::every_k(parse_int(std::string_view(sched).substr(5), "schedule"));
  } else {
    spec.schedule = NoiseSchedule::every_k(parse_int(sched, "schedule"));
  }
  const int seed = parse_int(trim(parts[2]), "seed");
  if (seed < 0) throw ConfigError("noise seed must be non-negative");
  spec.seed = static_cast<std::uint64_t>(seed);
  return spec;
}

SubgoalVocabulary SubgoalVocabulary::from_subgoals(const std::vector<SubGoal>& subgoals) {
  std::set<std::pair<std::string, std::size_t>> names;
  std::set<std::string> args;
  for (const auto& sg : subgoals) {
    if (sg.opaque) continue;
    names.insert({sg.name, sg.args.size()});
    args.insert(sg.args.begin(), sg.args.end());
  }
  return {{names.begin(), names.end()}, {args.begin(), args.end()}};
}

SubgoalVocabulary SubgoalVocabulary::from_rows(const std::vector<annotate::DatasetRow>& subgoal_rows) {
  std::vector<SubGoal> sgs;
  for (const auto& row : subgoal_rows) {
    if (auto sg = parse_subgoal(row.target)) sgs.push_back(std::move(*sg));
  }
  return from_subgoals(sgs);
}

SubGoal make_noise_subgoal(NoiseKind kind, const std::optional<SubGoal>& proposed, const NoiseScene& scene,
                           const SubgoalVocabulary& vocabulary, std::uint64_t seed) {
  Rng rng(mix_seed({seed, 0x6e6f697365ULL}));
  if (kind == NoiseKind::random) {
    if (vocabulary.empty()) throw ConfigError("random sub-goal noise needs a non-empty vocabulary");
    const auto& [name, arity] = rng.pick(vocabulary.names);
    std::vector<std::string> args;
    for (std::size_t i = 0; i < arity; ++i) {
      if (vocabulary.args.empty()) throw ConfigError("random sub-goal noise needs argument values");
      args.push_back(rng.pick(vocabulary.args));
    }
    return SubGoal::make(name, std::move(args));
  }

  if (!proposed || proposed->opaque) {
    return proposed ? *proposed : SubGoal::make("wait");
  }
  SubGoal out = *proposed;
  for (auto& arg : out.args) {
    const bool is_location = std::find(scene.locations.begin(), scene.locations.end(), arg) != scene.locations.end();
    if (is_location) {
      std::vector<std::string> others;
      for (const auto& l : scene.locations) {
        if (l != arg) others.push_back(l);
      }
      if (!others.empty()) arg = rng.pick(others);
    } else if (!scene.items.empty()) {
      arg = rng.pick(scene.items);
    }
  }
  return out;
}

std::uint64_t noise_step_seed(const NoiseSpec& spec, std::string_view task_desc, int step) {
  return mix_seed({spec.seed, fnv1a(task_desc), static_cast<std::uint64_t>(step)});
}

namespace {

constexpr std::string_view kArticles[] = {"a substance called ", "an ", "a ", "the ", "some "};
constexpr std::string_view kStateSuffixes[] = {" (which is turned on)", " (which is turned off)",
                                               " (that is closed)"};

// Strips one listing entry down to its object name, collecting any nested
// contents listed in a "(containing ...)" suffix.
void collect_entry(std::string entry, std::vector<std::string>& out) {
  entry = trim(entry);
  if (entry.empty() || entry == "the agent" || entry == "nothing") return;
  std::vector<std::string> nested;
  if (ends_with(entry, ")")) {
    auto at = entry.find(" (containing ");
    if (at != std::string::npos) {
      std::string inner = entry.substr(at + 13, entry.size() - at - 14);
      for (const auto& part : split_top_level(inner)) nested.push_back(part);
      entry = entry.substr(0, at);
    }
  }
  bool stripped = true;
  while (stripped) {
    stripped = false;
    for (auto s : kStateSuffixes) {
      if (ends_with(entry, s)) {
        entry = entry.substr(0, entry.size() - s.size());
        stripped = true;
      }
    }
    if (ends_with(entry, " stage)")) {
      auto at = entry.rfind(" (in the ");
      if (at != std::string::npos) {
        entry = entry.substr(0, at);
        stripped = true;
      }
    }
  }
  for (auto a : kArticles) {
    if (starts_with(entry, a)) {
      entry = entry.substr(a.size());
      break;
    }
  }
  if (!entry.empty()) out.push_back(entry);
  for (auto& n : nested) collect_entry(n, out);
}

void collect_panel(std::string_view panel, std::string_view marker, std::vector<std::string>& out) {
  auto at = panel.find(marker);
  if (at == std::string_view::npos) return;
  std::string_view rest = panel.substr(at + marker.size());
  if (auto doors = rest.find(" You also see:"); doors != std::string_view::npos) rest = rest.substr(0, doors);
  for (const auto& entry : split(rest, "|")) collect_entry(entry, out);
}

}  // namespace

std::vector<std::string> scene_items_from_prompt(std::string_view input, annotate::Role role) {
  auto ctx = annotate::parse_input(input, role);
  std::vector<std::string> out;
  collect_panel(ctx.room_text, "Here you see:", out);
  collect_panel(ctx.inventory_text, "you see:", out);
  return out;
}

NoisyPolicy::NoisyPolicy(std::shared_ptr<const Policy> inner, NoiseSpec spec, SubgoalVocabulary vocabulary,
                         std::vector<std::string> locations)
    : inner_(std::move(inner)), spec_(spec), vocabulary_(std::move(vocabulary)), locations_(std::move(locations)) {
  if (!inner_) throw ConfigError("noisy policy needs an inner policy");
  if (spec_.kind == NoiseKind::random && vocabulary_.empty()) {
    throw ConfigError("random sub-goal noise needs a non-empty vocabulary");
  }
}

std::string NoisyPolicy::generate(const std::string& input) const {
  std::string proposed = inner_->generate(input);
  annotate::PromptContext ctx;
  try {
    ctx = annotate::parse_input(input, annotate::Role::subgoal);
  } catch (const ParseError& e) {
    throw PolicyError(std::string("noisy policy cannot read its input: ") + e.what());
  }
  if (!spec_.schedule.fires_at(ctx.time)) return proposed;
  NoiseScene scene{locations_, scene_items_from_prompt(input, annotate::Role::subgoal)};
  auto noise = make_noise_subgoal(spec_.kind, parse_subgoal_lenient(proposed), scene, vocabulary_,
                                  noise_step_seed(spec_, ctx.task_desc, ctx.time));
  return noise.surface();
}

std::shared_ptr<const Policy> wrap_policy_with_noise(std::shared_ptr<const Policy> subgoal_policy, const NoiseSpec& spec,
                                                     SubgoalVocabulary vocabulary, std::vector<std::string> locations) {
  return std::make_shared<NoisyPolicy>(std::move(subgoal_policy), spec, std::move(vocabulary), std::move(locations));
}

}  // namespace subgoal::agent
