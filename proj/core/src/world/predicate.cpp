#include "subgoal/world/predicate.hpp"

#include <algorithm>

#include "subgoal/common/errors.hpp"

namespace subgoal::world {

namespace {

Predicate parse_atom(std::string_view text) {
  std::string t = trim(text);
  auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')') {
    throw ConfigError("malformed predicate '" + t + "'");
  }
  std::string head = trim(std::string_view(t).substr(0, open));
  std::string inner = t.substr(open + 1, t.size() - open - 2);
  Predicate p;
  for (auto& a : split(inner, ",")) p.args.push_back(trim(a));
  struct Form {
    std::string_view name;
    Predicate::Kind kind;
    std::size_t arity;
  };
  static constexpr Form forms[] = {
      {"at", Predicate::Kind::at, 1},         {"holding", Predicate::Kind::holding, 1},
      {"in", Predicate::Kind::in, 2},         {"focused", Predicate::Kind::focused, 1},
      {"state", Predicate::Kind::state, 2},
  };
  for (const auto& f : forms) {
    if (head == f.name) {
      if (p.args.size() != f.arity ||
          std::any_of(p.args.begin(), p.args.end(), [](auto& a) { return a.empty(); })) {
        throw ConfigError("predicate '" + t + "' expects " + std::to_string(f.arity) +
                          " argument(s)");
      }
      p.kind = f.kind;
      return p;
    }
  }
  throw ConfigError("unknown predicate '" + head + "'");
}

}  // namespace

Predicate parse_predicate(std::string_view text) {
  auto parts = split(text, "&");
  if (parts.size() == 1) return parse_atom(parts[0]);
  Predicate all;
  all.kind = Predicate::Kind::all;
  for (auto& part : parts) all.terms.push_back(parse_atom(part));
  return all;
}

const std::vector<std::string>& growth_stages() {
  static const std::vector<std::string> stages = {"seed", "seedling", "adult", "reproducing"};
  return stages;
}

std::string phase_of(const ObjectState& obj) {
  if (!obj.spec.substance) return {};
  if (obj.spec.melting_point && obj.temperature <= *obj.spec.melting_point) return "solid";
  if (obj.spec.boiling_point && obj.temperature >= *obj.spec.boiling_point) return "gas";
  return "liquid";
}

bool is_inside(const EnvState& state, std::string_view object, std::string_view container) {
  auto it = state.objects.find(std::string(object));
  while (it != state.objects.end() && it->second.holder == Holder::object) {
    if (it->second.parent == container) return true;
    it = state.objects.find(it->second.parent);
  }
  return false;
}

bool is_held(const EnvState& state, std::string_view object) {
  auto it = state.objects.find(std::string(object));
  while (it != state.objects.end()) {
    if (it->second.holder == Holder::inventory) return true;
    if (it->second.holder != Holder::object) return false;
    it = state.objects.find(it->second.parent);
  }
  return false;
}

namespace {

bool state_matches(const ObjectState& obj, std::string_view value) {
  if (obj.spec.substance && phase_of(obj) == value) return true;
  if (obj.spec.device || obj.spec.always_on) {
    bool on = obj.active || obj.spec.always_on;
    if ((value == "on" && on) || (value == "off" && !on)) return true;
  }
  if (obj.spec.openable) {
    if ((value == "open" && obj.open) || (value == "closed" && !obj.open)) return true;
  }
  if (obj.spec.growth_ticks > 0) {
    const auto& stages = growth_stages();
    auto target = std::find(stages.begin(), stages.end(), value);
    if (target != stages.end()) {
      auto have = static_cast<std::size_t>(
          std::min<int>(obj.growth / obj.spec.growth_ticks, static_cast<int>(stages.size()) - 1));
      return have >= static_cast<std::size_t>(target - stages.begin());
    }
  }
  return std::binary_search(obj.tags.begin(), obj.tags.end(), std::string(value));
}

}  // namespace

bool evaluate(const Predicate& p, const EnvState& state) {
  switch (p.kind) {
    case Predicate::Kind::at:
      return state.agent_location == p.args[0];
    case Predicate::Kind::holding:
      return is_held(state, p.args[0]);
    case Predicate::Kind::in:
      return is_inside(state, p.args[0], p.args[1]);
    case Predicate::Kind::focused:
      return std::find(state.focused.begin(), state.focused.end(), p.args[0]) !=
             state.focused.end();
    case Predicate::Kind::state: {
      auto it = state.objects.find(p.args[0]);
      return it != state.objects.end() && state_matches(it->second, p.args[1]);
    }
    case Predicate::Kind::all:
      return std::all_of(p.terms.begin(), p.terms.end(),
                         [&](const Predicate& t) { return evaluate(t, state); });
  }
  return false;
}

}  // namespace subgoal::world
