#include "subgoal/world/engine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "subgoal/common/errors.hpp"
#include "subgoal/common/rng.hpp"
#include "subgoal/world/predicate.hpp"

namespace subgoal::world {

namespace {

constexpr int kMaxExpertWaits = 80;

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

void erase_value(std::vector<std::string>& v, const std::string& x) {
  v.erase(std::remove(v.begin(), v.end(), x), v.end());
}

bool is_open_container(const ObjectState& o) { return o.spec.container && o.open; }

// Removes `name` from wherever it currently sits.
void detach(EnvState& s, const std::string& name) {
  auto& obj = s.objects.at(name);
  switch (obj.holder) {
    case Holder::room:
      erase_value(s.rooms[obj.parent], name);
      break;
    case Holder::object:
      erase_value(s.objects.at(obj.parent).contents, name);
      break;
    case Holder::inventory:
      erase_value(s.inventory, name);
      break;
  }
}

void place_in_room(EnvState& s, const std::string& name, const std::string& room) {
  detach(s, name);
  auto& obj = s.objects.at(name);
  obj.holder = Holder::room;
  obj.parent = room;
  s.rooms[room].push_back(name);
}

void place_in_object(EnvState& s, const std::string& name, const std::string& container) {
  detach(s, name);
  auto& obj = s.objects.at(name);
  obj.holder = Holder::object;
  obj.parent = container;
  s.objects.at(container).contents.push_back(name);
}

void place_in_inventory(EnvState& s, const std::string& name) {
  detach(s, name);
  auto& obj = s.objects.at(name);
  obj.holder = Holder::inventory;
  obj.parent.clear();
  s.inventory.push_back(name);
}

void add_tag(ObjectState& o, const std::string& tag) {
  auto it = std::lower_bound(o.tags.begin(), o.tags.end(), tag);
  if (it == o.tags.end() || *it != tag) o.tags.insert(it, tag);
}

void collect_visible(const EnvState& s, const std::string& name, std::vector<std::string>& out) {
  out.push_back(name);
  const auto& obj = s.objects.at(name);
  if (!is_open_container(obj)) return;
  for (const auto& child : obj.contents) collect_visible(s, child, out);
}

void collect_descendants(const EnvState& s, const std::string& name, std::vector<std::string>& out) {
  for (const auto& child : s.objects.at(name).contents) {
    out.push_back(child);
    collect_descendants(s, child, out);
  }
}

std::string normalize(std::string_view surface) {
  std::string lowered = to_lower(trim(surface));
  std::string out;
  bool space = false;
  for (char c : lowered) {
    if (c == ' ' || c == '\t') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

const std::map<std::string, std::string>& default_skill_templates() {
  static const std::map<std::string, std::string> skills = {
      {"pick_up", "pick up $0"},     {"put_down", "put down $0"},   {"focus_on", "focus on $0"},
      {"move", "move $0 to $1"},     {"pour", "pour $0 into $1"},   {"activate", "activate $0"},
      {"deactivate", "deactivate $0"}, {"open", "open $0"},          {"close", "close $0"},
      {"use", "use $0 on $1"},       {"read", "read $0"},           {"look_at", "look at $0"},
  };
  return skills;
}

std::string fill_slots(std::string tmpl, const std::vector<std::string>& args) {
  for (std::size_t i = args.size(); i-- > 0;) {
    tmpl = replace_all(tmpl, "$" + std::to_string(i), args[i]);
  }
  return tmpl;
}

}  // namespace

Engine::Engine(std::shared_ptr<const TaskSuite> suite) : suite_(std::move(suite)) {
  if (!suite_) throw ConfigError("engine requires a task suite");
}

const TaskSpec& Engine::task_of(const EnvState& state) const {
  return suite_->task(state.task_type_id);
}

const VariationSpec& Engine::variation_of(const EnvState& state) const {
  const auto& task = task_of(state);
  return task.variations.at(static_cast<std::size_t>(state.variation_id));
}

std::pair<EnvState, GoalDescription> Engine::instantiate(const TaskSpec& task, int variation_id,
                                                         std::uint64_t seed) const {
  if (variation_id < 0 || static_cast<std::size_t>(variation_id) >= task.variations.size()) {
    throw RangeError("variation " + std::to_string(variation_id) + " out of range for task '" +
                     task.task_type_id + "' (" + std::to_string(task.variations.size()) +
                     " variations)");
  }
  const auto& var = task.variations[static_cast<std::size_t>(variation_id)];
  EnvState s;
  s.task_type_id = task.task_type_id;
  s.variation_id = variation_id;
  s.rng_seed = seed;
  for (const auto& loc : suite_->world.locations) s.rooms[loc];

  std::set<std::string> used;
  auto add_object = [&](const ObjectSpec& spec) {
    ObjectState o;
    o.spec = spec;
    o.temperature = spec.temperature;
    o.tags = spec.tags;
    o.open = spec.open;
    o.active = spec.active;
    s.objects.emplace(spec.name, std::move(o));
    used.insert(spec.name);
  };
  for (const auto& spec : var.resolved_objects) add_object(spec);
  // Two passes so containers exist before their contents are attached.
  for (const auto& spec : var.resolved_objects) {
    auto& o = s.objects.at(spec.name);
    if (s.rooms.count(spec.location)) {
      o.holder = Holder::room;
      o.parent = spec.location;
      s.rooms[spec.location].push_back(spec.name);
    } else {
      o.holder = Holder::object;
      o.parent = spec.location;
      s.objects.at(spec.location).contents.push_back(spec.name);
    }
  }

  Rng rng(mix_seed({fnv1a(task.task_type_id), static_cast<std::uint64_t>(variation_id), seed}));
  std::vector<const ObjectSpec*> pool;
  for (const auto& d : suite_->world.distractors) {
    if (!used.count(d.name)) pool.push_back(&d);
  }
  for (const auto& loc : suite_->world.locations) {
    for (int k = 0; k < suite_->world.distractors_per_room && !pool.empty(); ++k) {
      auto idx = rng.below(pool.size());
      ObjectSpec spec = *pool[idx];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
      spec.location = loc;
      add_object(spec);
      auto& o = s.objects.at(spec.name);
      o.holder = Holder::room;
      o.parent = loc;
      s.rooms[loc].push_back(spec.name);
    }
  }

  for (const auto& d : suite_->world.doors) s.doors[door_key(d.a, d.b)] = d.open;
  for (const auto& d : var.open_doors) s.doors[door_key(d.first, d.second)] = true;

  s.agent_location = var.start;
  s.visited_rooms = {var.start};
  s.milestones_hit.assign(var.milestones.size(), false);
  check_milestones(s);

  GoalDescription goal{task.task_type_id, variation_id, TextN(var.goal_text)};
  return {std::move(s), std::move(goal)};
}

std::vector<std::string> Engine::visible_objects(const EnvState& s) const {
  std::vector<std::string> out;
  auto room = s.rooms.find(s.agent_location);
  if (room != s.rooms.end()) {
    for (const auto& name : room->second) collect_visible(s, name, out);
  }
  for (const auto& name : s.inventory) collect_visible(s, name, out);
  return out;
}

std::vector<std::string> Engine::adjacent_locations(const EnvState& s) const {
  std::vector<std::string> out;
  for (const auto& [key, open] : s.doors) {
    if (key.first == s.agent_location) out.push_back(key.second);
    if (key.second == s.agent_location) out.push_back(key.first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Action> Engine::parse_action(const EnvState& s, std::string_view surface) const {
  const std::string text = normalize(surface);
  if (text.empty()) return std::nullopt;
  const auto visible = visible_objects(s);
  const auto adjacent = adjacent_locations(s);
  auto ground = [&](std::string_view word, const std::string& slot) -> bool {
    if (slot.empty()) return false;
    return word == "LOC" ? contains(adjacent, slot) : contains(visible, slot);
  };

  for (const auto& t : action_templates()) {
    auto words = split(t.pattern, " ");
    if (t.arity == 0) {
      if (text == t.pattern) return make_action(t.verb);
      continue;
    }
    // Literal prefix up to the first slot.
    std::string prefix;
    std::size_t w = 0;
    for (; w < words.size() && words[w] != "OBJ" && words[w] != "LOC"; ++w) prefix += words[w] + " ";
    if (!starts_with(text, prefix)) continue;
    std::string rest = text.substr(prefix.size());
    std::string_view first_slot = words[w];
    if (t.arity == 1) {
      if (ground(first_slot, rest)) return make_action(t.verb, {rest});
      continue;
    }
    // Two slots joined by one literal separator word.
    std::string sep = " " + words[w + 1] + " ";
    std::string_view second_slot = words[w + 2];
    for (std::size_t pos = rest.find(sep); pos != std::string::npos; pos = rest.find(sep, pos + 1)) {
      std::string a = rest.substr(0, pos);
      std::string b = rest.substr(pos + sep.size());
      if (ground(first_slot, a) && ground(second_slot, b)) return make_action(t.verb, {a, b});
    }
  }
  return std::nullopt;
}

void Engine::tick(EnvState& s) const {
  for (const auto& [name, obj] : s.objects) {
    if (obj.spec.heat_rate == 0 || !(obj.spec.always_on || obj.active)) continue;
    std::vector<std::string> inside;
    collect_descendants(s, name, inside);
    for (const auto& child : inside) s.objects.at(child).temperature += obj.spec.heat_rate;
  }
  for (auto& [name, obj] : s.objects) {
    if (obj.spec.growth_ticks <= 0 || obj.holder != Holder::object) continue;
    const auto& pot = s.objects.at(obj.parent);
    if (std::binary_search(pot.tags.begin(), pot.tags.end(), std::string("soil")) &&
        std::binary_search(pot.tags.begin(), pot.tags.end(), std::string("watered"))) {
      ++obj.growth;
    }
  }
}

void Engine::check_milestones(EnvState& s) const {
  const auto& ms = variation_of(s).milestones;
  std::size_t next = 0;
  while (next < s.milestones_hit.size() && s.milestones_hit[next]) ++next;
  while (next < ms.size() && evaluate(ms[next].predicate, s)) {
    s.milestones_hit[next] = true;
    s.cumulative_score += ms[next].points;
    ++next;
  }
  if (next == ms.size() && !ms.empty()) {
    s.done = true;
    s.termination = TerminationReason::task_complete;
  }
}

std::pair<EnvState, Observation> Engine::step(const EnvState& state, std::string_view surface) const {
  auto parsed = parse_action(state, surface);
  if (!parsed) {
    Action raw;
    raw.surface = std::string(surface);
    return step(state, raw);
  }
  return step(state, *parsed);
}

std::pair<EnvState, Observation> Engine::step(const EnvState& state, const Action& action) const {
  EnvState s = state;
  const int before = s.cumulative_score;
  auto finish = [&](std::string text) {
    Observation obs;
    obs.text = TextN(std::move(text));
    obs.score_after = s.cumulative_score;
    obs.score_delta = s.cumulative_score - before;
    obs.done = s.done;
    obs.termination_reason = s.termination;
    return std::pair<EnvState, Observation>{std::move(s), std::move(obs)};
  };

  if (s.done) return finish("The episode has already ended.");
  ++s.step_count;

  auto parsed = parse_action(state, action.surface);
  if (!parsed) return finish(std::string(kUnparseable));
  const Action& a = *parsed;
  const auto& args = a.args;
  std::string text;

  auto obj = [&](std::size_t i) -> ObjectState& { return s.objects.at(args[i]); };

  switch (a.verb) {
    case Verb::look_around:
      text = render_room(s).substr(std::string_view("Current environment: ").size());
      break;
    case Verb::wait:
      text = "You decide to wait for 1 iterations.";
      break;
    case Verb::inventory:
      text = render_inventory(s).substr(std::string_view("Current inventory: ").size());
      break;
    case Verb::task:
      text = variation_of(s).goal_text;
      break;
    case Verb::go_to: {
      const auto& to = args[0];
      if (!s.doors.at(door_key(s.agent_location, to))) {
        text = "The door to the " + to + " is closed.";
        break;
      }
      s.agent_location = to;
      if (!contains(s.visited_rooms, to)) s.visited_rooms.push_back(to);
      text = "You move to the " + to + ".";
      break;
    }
    case Verb::open_door:
    case Verb::close_door: {
      bool want_open = a.verb == Verb::open_door;
      bool& door = s.doors.at(door_key(s.agent_location, args[0]));
      if (door == want_open) {
        text = want_open ? "The door is already open." : "The door is already closed.";
      } else {
        door = want_open;
        text = want_open ? "The door is now open." : "The door is now closed.";
      }
      break;
    }
    case Verb::open:
    case Verb::close: {
      auto& o = obj(0);
      bool want_open = a.verb == Verb::open;
      if (!o.spec.openable) {
        text = "The " + args[0] + " is not something you can " + (want_open ? "open." : "close.");
      } else if (o.open == want_open) {
        text = "The " + args[0] + " is already " + (want_open ? "open." : "closed.");
      } else {
        o.open = want_open;
        text = "The " + args[0] + " is now " + (want_open ? "open." : "closed.");
      }
      break;
    }
    case Verb::activate:
    case Verb::deactivate: {
      auto& o = obj(0);
      bool want_on = a.verb == Verb::activate;
      if (!o.spec.device) {
        text = "It is not clear how to " + std::string(want_on ? "activate" : "deactivate") + " the " + args[0] + ".";
      } else if (o.active == want_on) {
        text = "The " + args[0] + " is already " + (want_on ? "activated." : "deactivated.");
      } else {
        o.active = want_on;
        text = "The " + args[0] + " is now " + (want_on ? "activated." : "deactivated.");
      }
      break;
    }
    case Verb::pick_up: {
      auto& o = obj(0);
      if (!o.spec.portable) {
        text = "You cannot pick up the " + args[0] + ".";
      } else if (o.holder == Holder::inventory) {
        text = "The " + args[0] + " is already in your inventory.";
      } else {
        place_in_inventory(s, args[0]);
        text = "You move the " + args[0] + " to the inventory.";
      }
      break;
    }
    case Verb::put_down: {
      if (obj(0).holder != Holder::inventory) {
        text = "The " + args[0] + " is not in your inventory.";
      } else {
        place_in_room(s, args[0], s.agent_location);
        text = "You move the " + args[0] + " to the " + s.agent_location + ".";
      }
      break;
    }
    case Verb::move: {
      const auto& what = args[0];
      const auto& into = args[1];
      auto& target = obj(1);
      if (!obj(0).spec.portable) {
        text = "You cannot move the " + what + ".";
      } else if (!target.spec.container) {
        text = "The " + into + " cannot hold things.";
      } else if (!target.open) {
        text = "The " + into + " is closed.";
      } else if (what == into || is_inside(s, into, what)) {
        text = "You cannot move the " + what + " into itself.";
      } else if (obj(0).holder == Holder::object && obj(0).parent == into) {
        text = "The " + what + " is already in the " + into + ".";
      } else {
        place_in_object(s, what, into);
        text = "You move the " + what + " to the " + into + ".";
      }
      break;
    }
    case Verb::pour: {
      const auto& what = args[0];
      const auto& into = args[1];
      auto& target = obj(1);
      auto& source = obj(0);
      if (!target.spec.container || !target.open || what == into) {
        text = "You cannot pour the " + what + " into the " + into + ".";
      } else if (!source.spec.pour_tag.empty()) {
        add_tag(target, source.spec.pour_tag);
        text = "You pour the " + what + " into the " + into + ".";
      } else if (source.spec.substance) {
        if (is_inside(s, into, what)) {
          text = "You cannot pour the " + what + " into the " + into + ".";
        } else {
          place_in_object(s, what, into);
          text = "You pour the " + what + " into the " + into + ".";
        }
      } else {
        std::vector<std::string> poured;
        for (const auto& c : source.contents) {
          if (s.objects.at(c).spec.substance) poured.push_back(c);
        }
        if (poured.empty() || is_inside(s, into, what)) {
          text = "There is nothing to pour from the " + what + ".";
        } else {
          for (const auto& c : poured) place_in_object(s, c, into);
          text = "You pour the contents of the " + what + " into the " + into + ".";
        }
      }
      break;
    }
    case Verb::focus_on: {
      const auto& targets = variation_of(s).focus_targets;
      if (contains(targets, args[0])) {
        if (!contains(s.focused, args[0])) s.focused.push_back(args[0]);
        text = "You focus on the " + args[0] + ".";
      } else {
        s.done = true;
        s.termination = TerminationReason::wrong_focus;
        s.cumulative_score = 0;
        return finish("You focus on the " + args[0] + ". That is not the focus of this task; the task has failed.");
      }
      break;
    }
    case Verb::look_at:
      text = describe_object(s, args[0]);
      text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
      text += ".";
      break;
    case Verb::read: {
      const auto& t = obj(0).spec.readable_text;
      text = t.empty() ? "There is nothing written on the " + args[0] + "." : t;
      break;
    }
    case Verb::use: {
      auto& tool = obj(0);
      if (!tool.spec.thermometer || args[0] == args[1]) {
        text = "Nothing happens.";
      } else {
        add_tag(obj(1), "measured");
        text = "The thermometer measures a temperature of " + std::to_string(obj(1).temperature) +
               " degrees celsius.";
      }
      break;
    }
  }

  tick(s);
  check_milestones(s);
  return finish(std::move(text));
}

std::vector<Action> Engine::admissible_commands(const EnvState& s) const {
  std::vector<Action> out;
  out.push_back(make_action(Verb::look_around));
  out.push_back(make_action(Verb::wait));
  out.push_back(make_action(Verb::inventory));
  out.push_back(make_action(Verb::task));
  for (const auto& loc : adjacent_locations(s)) {
    bool open = s.doors.at(door_key(s.agent_location, loc));
    out.push_back(make_action(Verb::open_door, {loc}));
    if (open) {
      out.push_back(make_action(Verb::close_door, {loc}));
      out.push_back(make_action(Verb::go_to, {loc}));
    }
  }
  const auto visible = visible_objects(s);
  for (const auto& name : visible) {
    const auto& o = s.objects.at(name);
    out.push_back(make_action(Verb::look_at, {name}));
    out.push_back(make_action(Verb::focus_on, {name}));
    if (o.spec.portable && o.holder != Holder::inventory) out.push_back(make_action(Verb::pick_up, {name}));
    if (o.holder == Holder::inventory) out.push_back(make_action(Verb::put_down, {name}));
    if (o.spec.openable) out.push_back(make_action(o.open ? Verb::close : Verb::open, {name}));
    if (o.spec.device) out.push_back(make_action(o.active ? Verb::deactivate : Verb::activate, {name}));
    if (!o.spec.readable_text.empty()) out.push_back(make_action(Verb::read, {name}));
    for (const auto& other : visible) {
      if (other == name) continue;
      const auto& t = s.objects.at(other);
      bool target_ok = t.spec.container && t.open;
      if (o.spec.portable && target_ok && !is_inside(s, other, name) &&
          !(o.holder == Holder::object && o.parent == other)) {
        out.push_back(make_action(Verb::move, {name, other}));
      }
      bool pourable = !o.spec.pour_tag.empty() ||
                      (o.spec.substance && !is_inside(s, other, name)) ||
                      (!is_inside(s, other, name) &&
                       std::any_of(o.contents.begin(), o.contents.end(), [&](const std::string& c) {
                         return s.objects.at(c).spec.substance;
                       }));
      if (target_ok && pourable) out.push_back(make_action(Verb::pour, {name, other}));
      if (o.spec.thermometer) out.push_back(make_action(Verb::use, {name, other}));
    }
  }
  std::sort(out.begin(), out.end(), [](const Action& a, const Action& b) { return a.surface < b.surface; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Action& a, const Action& b) { return a.surface == b.surface; }),
            out.end());
  // Drop entries whose surface would ground to a different action (e.g. an
  // object whose name contains " to ").
  std::vector<Action> sound;
  for (auto& a : out) {
    auto p = parse_action(s, a.surface);
    if (p && p->verb == a.verb && p->args == a.args) sound.push_back(std::move(a));
  }
  return sound;
}

std::vector<ExpertStep> Engine::expert_trajectory(const TaskSpec& task, int variation_id) const {
  auto [s, goal] = instantiate(task, variation_id, 0);
  (void)goal;
  const auto& var = task.variations[static_cast<std::size_t>(variation_id)];
  const std::string where =
      "task '" + task.task_type_id + "' variation " + std::to_string(variation_id);

  std::vector<ExpertStep> out;
  std::optional<SubGoal> open_segment;
  std::size_t segment = 0;

  auto begin_segment = [&](const SubGoal& sg) {
    if (open_segment && *open_segment == sg) return;
    if (open_segment) ++segment;
    open_segment = sg;
  };
  auto run = [&](const std::string& surface) {
    if (s.done) throw AuthoringError(where + ": episode ended before expert action '" + surface + "'");
    auto action = parse_action(s, surface);
    if (!action) throw AuthoringError(where + ": expert action '" + surface + "' is not executable");
    auto [next, obs] = step(s, *action);
    s = std::move(next);
    out.push_back({*action, *open_segment, segment, obs.score_after});
  };
  auto navigate = [&](const std::string& dest) {
    if (!s.rooms.count(dest)) throw AuthoringError(where + ": unknown location '" + dest + "'");
    // BFS over the door graph; neighbours in alphabetical order keep it stable.
    std::map<std::string, std::string> prev{{s.agent_location, ""}};
    std::deque<std::string> queue{s.agent_location};
    while (!queue.empty() && !prev.count(dest)) {
      auto cur = queue.front();
      queue.pop_front();
      std::vector<std::string> nbrs;
      for (const auto& [key, open] : s.doors) {
        if (key.first == cur) nbrs.push_back(key.second);
        if (key.second == cur) nbrs.push_back(key.first);
      }
      std::sort(nbrs.begin(), nbrs.end());
      for (const auto& n : nbrs) {
        if (prev.emplace(n, cur).second) queue.push_back(n);
      }
    }
    if (!prev.count(dest)) throw AuthoringError(where + ": no route to '" + dest + "'");
    std::vector<std::string> hops;
    for (auto at = dest; at != s.agent_location; at = prev.at(at)) hops.push_back(at);
    std::reverse(hops.begin(), hops.end());
    for (const auto& hop : hops) {
      begin_segment(SubGoal::make("navigate_to", {hop}));
      run("open door to " + hop);
      run("go to " + hop);
    }
  };

  for (std::size_t i = 0; i < var.milestones.size(); ++i) {
    if (s.milestones_hit[i]) continue;
    const auto& m = var.milestones[i];
    const auto& sg = m.subgoal;
    const std::string name = to_lower(sg.name);
    bool waits = m.then_wait;
    if (!m.actions.empty()) {
      begin_segment(sg);
      for (const auto& a : m.actions) run(a);
    } else if (name == "navigate_to" && sg.args.size() == 1) {
      navigate(sg.args[0]);
    } else if (name == "wait") {
      begin_segment(sg);
      waits = true;
    } else {
      auto skill = default_skill_templates().find(name);
      if (skill == default_skill_templates().end()) {
        throw AuthoringError(where + ": milestone " + std::to_string(i) + " sub-goal '" + sg.surface() +
                             "' has no default skill; list its actions explicitly");
      }
      begin_segment(sg);
      run(fill_slots(skill->second, sg.args));
    }
    for (int n = 0; waits && !s.milestones_hit[i]; ++n) {
      if (n == kMaxExpertWaits) {
        throw AuthoringError(where + ": milestone " + std::to_string(i) + " not reached after " +
                             std::to_string(kMaxExpertWaits) + " waits");
      }
      run("wait");
    }
    if (!s.milestones_hit[i]) {
      throw AuthoringError(where + ": expert plan does not reach milestone " + std::to_string(i) +
                           " (" + m.predicate_text + ")");
    }
  }
  if (s.cumulative_score != 100) {
    throw AuthoringError(where + ": expert plan ends with score " + std::to_string(s.cumulative_score));
  }
  return out;
}

std::string describe_object(const EnvState& state, const std::string& name) {
  const auto& o = state.objects.at(name);
  std::string out;
  if (o.spec.substance) {
    out = "a substance called " + name;
  } else {
    std::string article = o.spec.article.empty() ? indefinite_article(name) : o.spec.article;
    out = article.empty() ? name : article + " " + name;
  }
  const bool switchable = o.spec.device;
  if (o.spec.growth_ticks > 0) {
    const auto& stages = growth_stages();
    auto idx = std::min<std::size_t>(static_cast<std::size_t>(o.growth / o.spec.growth_ticks), stages.size() - 1);
    out += " (in the " + stages[idx] + " stage)";
  }
  if (switchable) out += o.active ? " (which is turned on)" : " (which is turned off)";
  if (o.spec.openable && !o.open) {
    out += " (that is closed)";
  } else if (o.spec.container && !o.contents.empty()) {
    std::vector<std::string> parts;
    for (const auto& c : o.contents) parts.push_back(describe_object(state, c));
    out += " (containing " + join(parts, ", ") + ")";
  }
  return out;
}

std::string render_room(const EnvState& state) {
  const auto& room = state.agent_location;
  static const std::vector<std::string> kEmpty;
  auto it = state.rooms.find(room);
  const auto& names = it == state.rooms.end() ? kEmpty : it->second;
  std::string out = "Current environment: This " + room + " location is called the " + room +
                    ". Here you see: | the agent |";
  for (const auto& n : names) out += " " + describe_object(state, n) + " |";
  std::vector<std::string> doors;
  for (const auto& [key, open] : state.doors) {
    if (key.first == room) doors.push_back(key.second);
    if (key.second == room) doors.push_back(key.first);
  }
  std::sort(doors.begin(), doors.end());
  if (!doors.empty()) {
    out += " You also see: |";
    for (const auto& d : doors) out += " A door to the " + d + " |";
  }
  return out;
}

std::string render_inventory(const EnvState& state) {
  std::string out = "Current inventory: In your inventory, you see: |";
  if (state.inventory.empty()) return out + " nothing |";
  for (const auto& n : state.inventory) out += " " + describe_object(state, n) + " |";
  return out;
}

std::string render_visited(const EnvState& state) {
  return "Visited rooms: " + join(state.visited_rooms, ", ");
}

VariationSplit split_variations(const TaskSpec& task) {
  const int n = static_cast<int>(task.variations.size());
  if (n < 4) {
    throw ConfigError("task '" + task.task_type_id + "' has " + std::to_string(n) +
                      " variations; splitting needs at least 4");
  }
  const int train = n / 2;
  const int dev = n / 4;
  VariationSplit out;
  for (int i = 0; i < n; ++i) {
    if (i < train) {
      out.train.push_back(i);
    } else if (i < train + dev) {
      out.dev.push_back(i);
    } else {
      out.test.push_back(i);
    }
  }
  return out;
}

const std::vector<int>& split_members(const VariationSplit& split, SplitName which) {
  switch (which) {
    case SplitName::train: return split.train;
    case SplitName::dev: return split.dev;
    case SplitName::test: return split.test;
  }
  return split.train;
}

}  // namespace subgoal::world
