#include "subgoal/agent/policy.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "subgoal/annotate/records.hpp"
#include "subgoal/common/errors.hpp"
#include "subgoal/common/rng.hpp"
#include "subgoal/common/text.hpp"

namespace subgoal::agent {

using annotate::DatasetRow;
using annotate::PromptContext;
using annotate::Role;

RandomFromVocabulary::RandomFromVocabulary(std::vector<std::string> vocabulary, std::uint64_t seed)
    : vocabulary_(std::move(vocabulary)), seed_(seed) {
  if (vocabulary_.empty()) throw ConfigError("random policy needs a non-empty vocabulary");
}

std::string RandomFromVocabulary::generate(const std::string& input) const {
  Rng rng(mix_seed({seed_, fnv1a(input)}));
  return rng.pick(vocabulary_);
}

ReplayOracle::Parsed ReplayOracle::digest(PromptContext ctx) {
  Parsed p;
  p.last_action = ctx.history.empty() ? std::string() : ctx.history.back().action;
  p.current = ctx.current ? ctx.current->surface() : std::string();
  p.completed = annotate::render_subgoal_list(ctx.completed);
  p.ctx = std::move(ctx);
  return p;
}

ReplayOracle::ReplayOracle(const std::vector<DatasetRow>& rows, Role role) : role_(role) {
  if (rows.empty()) throw ConfigError("replay oracle needs at least one dataset row");
  for (const auto& row : rows) {
    const std::size_t idx = targets_.size();
    // First occurrence wins so lookups follow dataset order.
    exact_.emplace(row.input, idx);
    targets_.push_back(row.target);
    parsed_.push_back(digest(annotate::parse_input(row.input, role)));
    by_task_[parsed_.back().ctx.task_desc].push_back(idx);
  }
}

std::string ReplayOracle::generate(const std::string& input) const {
  if (auto it = exact_.find(input); it != exact_.end()) return targets_[it->second];

  Parsed q;
  try {
    q = digest(annotate::parse_input(input, role_));
  } catch (const ParseError& e) {
    throw PolicyError(std::string("replay oracle cannot read its input: ") + e.what());
  }
  std::vector<std::size_t> all;
  const std::vector<std::size_t>* candidates = nullptr;
  if (auto it = by_task_.find(q.ctx.task_desc); it != by_task_.end()) {
    candidates = &it->second;
  } else {
    all.resize(parsed_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    candidates = &all;
  }

  std::size_t best = candidates->front();
  int best_score = -1;
  int best_dt = std::numeric_limits<int>::max();
  for (std::size_t idx : *candidates) {
    const auto& r = parsed_[idx];
    int s = 0;
    if (r.ctx.score == q.ctx.score) s += 4;
    if (r.ctx.room_text == q.ctx.room_text) s += 2;
    if (r.ctx.inventory_text == q.ctx.inventory_text) s += 2;
    if (r.last_action == q.last_action) s += 2;
    if (r.current == q.current) s += 1;
    if (r.completed == q.completed) s += 1;
    int dt = std::abs(r.ctx.time - q.ctx.time);
    if (s > best_score || (s == best_score && dt < best_dt)) {
      best = idx;
      best_score = s;
      best_dt = dt;
    }
  }
  return targets_[best];
}

namespace {

constexpr std::string_view kRepeatWait = "wait*";

bool is_word_boundary(const std::string& s, std::size_t pos) {
  return pos == 0 || pos >= s.size() || s[pos] == ' ';
}

std::string replace_words(const std::string& text, const std::string& word, const std::string& with) {
  if (word.empty()) return text;
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    auto at = text.find(word, i);
    if (at == std::string::npos) break;
    std::size_t end = at + word.size();
    if ((at == 0 || text[at - 1] == ' ') && is_word_boundary(text, end)) {
      out += text.substr(i, at - i) + with;
      i = end;
    } else {
      out += text.substr(i, at - i + 1);
      i = at + 1;
    }
  }
  return out + text.substr(i);
}

std::string instantiate(const std::string& step, const std::vector<std::string>& args) {
  std::string out = step;
  for (std::size_t k = args.size(); k-- > 0;) out = replace_all(out, "$" + std::to_string(k), args[k]);
  return out;
}

}  // namespace

SkillExecutor::Template induce_template(const annotate::SubGoalSegment& segment) {
  const auto& args = segment.subgoal.args;
  std::vector<std::size_t> order(args.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  // Longest argument first so "apple seed" is not split by "apple".
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return args[a].size() > args[b].size(); });

  SkillExecutor::Template out;
  for (const auto& action : segment.actions) {
    if (action == "wait") {
      if (out.empty() || out.back() != kRepeatWait) out.emplace_back(kRepeatWait);
      continue;
    }
    std::string step = action;
    for (std::size_t k : order) step = replace_words(step, args[k], "$" + std::to_string(k));
    out.push_back(std::move(step));
  }
  return out;
}

SkillExecutor SkillExecutor::from_segments(const std::vector<annotate::SubGoalSegment>& segments) {
  struct Tally {
    std::map<Template, std::pair<int, std::size_t>> votes;  // template -> (count, first seen)
  };
  std::map<std::pair<std::string, std::size_t>, Tally> tallies;
  std::size_t seen = 0;
  for (const auto& seg : segments) {
    if (seg.subgoal.opaque || seg.actions.empty()) continue;
    auto& t = tallies[{seg.subgoal.name, seg.subgoal.args.size()}];
    auto [it, inserted] = t.votes.try_emplace(induce_template(seg), 0, seen++);
    ++it->second.first;
  }
  SkillExecutor exec;
  for (const auto& [key, tally] : tallies) {
    const Template* best = nullptr;
    std::pair<int, std::size_t> best_vote{0, 0};
    for (const auto& [tmpl, vote] : tally.votes) {
      if (!best || vote.first > best_vote.first ||
          (vote.first == best_vote.first && vote.second < best_vote.second)) {
        best = &tmpl;
        best_vote = vote;
      }
    }
    exec.skills_[key] = *best;
  }
  return exec;
}

SkillExecutor SkillExecutor::from_rows(const std::vector<DatasetRow>& action_rows) {
  std::vector<annotate::SubGoalSegment> segments;
  std::string last_key;
  std::optional<SubGoal> last_sg;
  for (const auto& row : action_rows) {
    auto ctx = annotate::parse_input(row.input, Role::action);
    std::string key = row.task_type + "#" + std::to_string(row.variation);
    if (!ctx.current) {
      last_key.clear();
      continue;
    }
    if (key != last_key || !last_sg || *last_sg != *ctx.current) segments.push_back({*ctx.current, {}});
    segments.back().actions.push_back(row.target);
    last_key = key;
    last_sg = ctx.current;
  }
  return from_segments(segments);
}

SkillExecutor SkillExecutor::literal(const std::vector<annotate::SubGoalSegment>& segments) {
  SkillExecutor exec;
  exec.is_literal_ = true;
  for (const auto& seg : segments) {
    if (seg.actions.empty()) continue;
    Template steps;
    for (const auto& a : seg.actions) {
      if (a == "wait") {
        if (steps.empty() || steps.back() != kRepeatWait) steps.emplace_back(kRepeatWait);
      } else {
        steps.push_back(a);
      }
    }
    // A sub-goal that recurs keeps the steps of its first segment.
    exec.literal_.try_emplace(seg.subgoal.surface(), std::move(steps));
  }
  return exec;
}

std::optional<SkillExecutor::Template> SkillExecutor::template_for(const std::string& name, std::size_t arity) const {
  auto it = skills_.find({name, arity});
  if (it == skills_.end()) return std::nullopt;
  return it->second;
}

std::string SkillExecutor::next_action(const std::optional<SubGoal>& subgoal, const std::string& last_action) const {
  if (!subgoal) return "wait";
  std::vector<std::string> steps;
  if (is_literal_) {
    auto it = literal_.find(subgoal->surface());
    if (it == literal_.end()) return "wait";
    steps = it->second;
  } else {
    if (subgoal->opaque) return "wait";
    auto tmpl = template_for(subgoal->name, subgoal->args.size());
    if (!tmpl || tmpl->empty()) return "wait";
    for (const auto& s : *tmpl) steps.push_back(instantiate(s, subgoal->args));
  }

  for (std::size_t k = steps.size(); k-- > 0;) {
    bool matches = steps[k] == kRepeatWait ? last_action == "wait" : last_action == steps[k];
    if (!matches) continue;
    if (steps[k] == kRepeatWait) return "wait";
    if (k + 1 < steps.size()) return steps[k + 1] == kRepeatWait ? "wait" : steps[k + 1];
    return "wait";
  }
  return steps[0] == kRepeatWait ? "wait" : steps[0];
}

std::string SkillExecutor::generate(const std::string& input) const {
  PromptContext ctx;
  try {
    ctx = annotate::parse_input(input, Role::action);
  } catch (const ParseError& e) {
    throw PolicyError(std::string("skill executor cannot read its input: ") + e.what());
  }
  return next_action(ctx.current, ctx.history.empty() ? std::string() : ctx.history.back().action);
}

VocabularySnap::VocabularySnap(std::shared_ptr<const Policy> inner, std::vector<std::string> names)
    : inner_(std::move(inner)), names_(std::move(names)) {
  if (!inner_) throw ConfigError("vocabulary snap needs an inner policy");
  std::sort(names_.begin(), names_.end());
  names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
}

std::string VocabularySnap::generate(const std::string& input) const {
  std::string raw = inner_->generate(input);
  auto sg = parse_subgoal(raw);
  if (!sg || names_.empty()) return raw;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::string snapped = sg->name;
  for (const auto& n : names_) {
    auto d = char_levenshtein(sg->name, n);
    if (d < best) {
      best = d;
      snapped = n;
    }
  }
  sg->name = snapped;
  return sg->surface();
}

RemotePolicy::RemotePolicy(ChatEndpoint endpoint) : client_(std::make_unique<ChatClient>(std::move(endpoint))) {}

std::string RemotePolicy::generate(const std::string& input) const {
  try {
    return trim(client_->complete({{"user", input}}));
  } catch (const TransportError& e) {
    throw PolicyError(std::string("remote policy: ") + e.what());
  } catch (const ParseError& e) {
    throw PolicyError(std::string("remote policy: ") + e.what());
  }
}

std::vector<DatasetRow> flatten_rows(const std::vector<DatasetRow>& action_rows) {
  std::vector<DatasetRow> out;
  out.reserve(action_rows.size());
  for (const auto& row : action_rows) {
    auto ctx = annotate::parse_input(row.input, Role::action);
    ctx.completed.clear();
    ctx.current.reset();
    DatasetRow flat = row;
    flat.input = annotate::render_input(ctx, Role::action);
    out.push_back(std::move(flat));
  }
  return out;
}

}  // namespace subgoal::agent
