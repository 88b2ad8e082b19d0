#include "subgoal/world/suite.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "subgoal/common/errors.hpp"
#include "subgoal/world/predicate.hpp"

namespace subgoal::world {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ConfigError(field + ": " + msg);
}

void check_keys(const json& j, const std::string& field, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(field, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      fail(field + "." + it.key(), "unknown field");
    }
  }
}

const json& require(const json& j, const std::string& field, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end()) fail(field + "." + std::string(key), "missing required field");
  return *it;
}

std::string get_string(const json& j, const std::string& field, std::string_view key) {
  const auto& v = require(j, field, key);
  if (!v.is_string()) fail(field + "." + std::string(key), "expected a string");
  return v.get<std::string>();
}

template <typename T>
T get_or(const json& j, const std::string& field, std::string_view key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    fail(field + "." + std::string(key), "wrong type");
  }
}

std::vector<std::string> get_strings(const json& j, const std::string& field, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end()) return {};
  if (!it->is_array()) fail(field + "." + std::string(key), "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < it->size(); ++i) {
    if (!(*it)[i].is_string()) {
      fail(field + "." + std::string(key) + "[" + std::to_string(i) + "]", "expected a string");
    }
    out.push_back((*it)[i].get<std::string>());
  }
  return out;
}

ObjectSpec parse_object(const json& j, const std::string& field, bool needs_location) {
  check_keys(j, field,
             {"name", "in", "article", "portable", "container", "openable", "open", "device",
              "active", "always_on", "heat_rate", "substance", "living", "temperature",
              "melting_point", "boiling_point", "thermometer", "text", "pour_tag",
              "growth_ticks", "tags"});
  ObjectSpec o;
  o.name = get_string(j, field, "name");
  if (needs_location) o.location = get_string(j, field, "in");
  o.article = get_or<std::string>(j, field, "article", "");
  o.portable = get_or(j, field, "portable", true);
  o.container = get_or(j, field, "container", false);
  o.openable = get_or(j, field, "openable", false);
  o.open = get_or(j, field, "open", !o.openable);
  o.device = get_or(j, field, "device", false);
  o.active = get_or(j, field, "active", false);
  o.always_on = get_or(j, field, "always_on", false);
  o.heat_rate = get_or(j, field, "heat_rate", 0);
  o.substance = get_or(j, field, "substance", false);
  o.living = get_or(j, field, "living", false);
  o.temperature = get_or(j, field, "temperature", 20);
  if (j.contains("melting_point")) o.melting_point = get_or(j, field, "melting_point", 0);
  if (j.contains("boiling_point")) o.boiling_point = get_or(j, field, "boiling_point", 0);
  o.thermometer = get_or(j, field, "thermometer", false);
  o.readable_text = get_or<std::string>(j, field, "text", "");
  o.pour_tag = get_or<std::string>(j, field, "pour_tag", "");
  o.growth_ticks = get_or(j, field, "growth_ticks", 0);
  if (o.growth_ticks < 0) fail(field + ".growth_ticks", "must be >= 0");
  o.tags = get_strings(j, field, "tags");
  std::sort(o.tags.begin(), o.tags.end());
  if (o.substance) o.portable = get_or(j, field, "portable", false);
  if (o.name.empty()) fail(field + ".name", "must be non-empty");
  return o;
}

ObjectSpec resolve_object(ObjectSpec o, const std::map<std::string, std::string>& params) {
  o.name = substitute(o.name, params);
  o.location = substitute(o.location, params);
  o.readable_text = substitute(o.readable_text, params);
  for (auto& t : o.tags) t = substitute(t, params);
  std::sort(o.tags.begin(), o.tags.end());
  return o;
}

MilestoneTemplate parse_milestone(const json& j, const std::string& field) {
  check_keys(j, field, {"predicate", "points", "subgoal", "actions", "then_wait"});
  MilestoneTemplate m;
  m.predicate = get_string(j, field, "predicate");
  const auto& pts = require(j, field, "points");
  if (!pts.is_number_integer()) fail(field + ".points", "expected an integer");
  m.points = pts.get<int>();
  if (m.points < 0) fail(field + ".points", "must be >= 0");
  m.subgoal = get_string(j, field, "subgoal");
  m.actions = get_strings(j, field, "actions");
  m.then_wait = get_or(j, field, "then_wait", false);
  return m;
}

void resolve_variation(const WorldSpec& world, const TaskSpec& task, VariationSpec& v,
                       const std::string& field) {
  auto with_field = [&](const std::string& sub, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      fail(field + sub, e.what());
    }
  };

  with_field(".params", [&] { v.goal_text = substitute(task.description_template, v.params); });
  with_field(".start", [&] { v.start = substitute(v.start, v.params); });
  const auto& locs = world.locations;
  auto is_location = [&](const std::string& n) {
    return std::find(locs.begin(), locs.end(), n) != locs.end();
  };
  if (!is_location(v.start)) fail(field + ".start", "unknown location '" + v.start + "'");

  std::vector<ObjectSpec> objects = world.fixtures;
  with_field(".objects", [&] {
    for (const auto& t : task.object_templates) objects.push_back(resolve_object(t, v.params));
    for (const auto& o : v.objects) objects.push_back(resolve_object(o, v.params));
  });
  std::set<std::string> names;
  for (const auto& o : objects) {
    if (is_location(o.name)) fail(field + ".objects", "object '" + o.name + "' shadows a location");
    if (!names.insert(o.name).second) {
      fail(field + ".objects", "duplicate object name '" + o.name + "'");
    }
  }
  for (const auto& o : objects) {
    if (is_location(o.location)) continue;
    auto parent = std::find_if(objects.begin(), objects.end(),
                               [&](const ObjectSpec& p) { return p.name == o.location; });
    if (parent == objects.end()) {
      fail(field + ".objects", "'" + o.name + "' placed in unknown '" + o.location + "'");
    }
    if (!parent->container) {
      fail(field + ".objects", "'" + o.name + "' placed in non-container '" + o.location + "'");
    }
  }
  // Reject containment cycles.
  for (const auto& o : objects) {
    std::string cur = o.location;
    for (std::size_t depth = 0; !is_location(cur); ++depth) {
      if (depth > objects.size()) fail(field + ".objects", "containment cycle at '" + o.name + "'");
      auto parent = std::find_if(objects.begin(), objects.end(),
                                 [&](const ObjectSpec& p) { return p.name == cur; });
      cur = parent->location;
    }
  }
  v.resolved_objects = std::move(objects);

  for (auto& [a, b] : v.open_doors) {
    a = substitute(a, v.params);
    b = substitute(b, v.params);
    bool found = std::any_of(world.doors.begin(), world.doors.end(), [&](const DoorSpec& d) {
      return door_key(d.a, d.b) == door_key(a, b);
    });
    if (!found) fail(field + ".open_doors", "no door between '" + a + "' and '" + b + "'");
  }

  int total = 0;
  v.milestones.clear();
  v.focus_targets.clear();
  for (std::size_t i = 0; i < task.milestone_templates.size(); ++i) {
    const auto& mt = task.milestone_templates[i];
    std::string mfield = field + ".milestones[" + std::to_string(i) + "]";
    Milestone m;
    m.points = mt.points;
    m.then_wait = mt.then_wait;
    with_field(".milestones[" + std::to_string(i) + "]", [&] {
      m.predicate_text = substitute(mt.predicate, v.params);
      m.predicate = parse_predicate(m.predicate_text);
      auto sg = parse_subgoal(substitute(mt.subgoal, v.params));
      if (!sg) throw ConfigError("subgoal must have the form name(args)");
      m.subgoal = *sg;
      for (const auto& a : mt.actions) m.actions.push_back(substitute(a, v.params));
    });
    std::vector<const Predicate*> atoms;
    if (m.predicate.kind == Predicate::Kind::all) {
      for (const auto& t : m.predicate.terms) atoms.push_back(&t);
    } else {
      atoms.push_back(&m.predicate);
    }
    for (const auto* a : atoms) {
      if (a->kind == Predicate::Kind::at) {
        if (!is_location(a->args[0])) fail(mfield + ".predicate", "unknown location '" + a->args[0] + "'");
        continue;
      }
      std::size_t nobj = a->kind == Predicate::Kind::in ? 2 : 1;
      for (std::size_t k = 0; k < nobj; ++k) {
        if (!names.count(a->args[k])) fail(mfield + ".predicate", "unknown object '" + a->args[k] + "'");
      }
      if (a->kind == Predicate::Kind::focused &&
          std::find(v.focus_targets.begin(), v.focus_targets.end(), a->args[0]) ==
              v.focus_targets.end()) {
        v.focus_targets.push_back(a->args[0]);
      }
    }
    total += m.points;
    v.milestones.push_back(std::move(m));
  }
  if (total != 100) {
    fail(field + ".milestones", "points sum to " + std::to_string(total) + ", expected 100");
  }
}

}  // namespace

TaskSuite parse_task_suite(std::string_view json_text, const SuiteRequirements& req) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("suite: invalid JSON: ") + e.what());
  }
  check_keys(root, "suite", {"schema_version", "world", "tasks"});
  if (get_or(root, "suite", "schema_version", 1) != 1) {
    fail("suite.schema_version", "unsupported version");
  }

  TaskSuite suite;
  const auto& w = require(root, "suite", "world");
  check_keys(w, "world", {"locations", "doors", "fixtures", "distractors", "distractors_per_room"});
  suite.world.locations = get_strings(w, "world", "locations");
  if (suite.world.locations.empty()) fail("world.locations", "must be non-empty");
  auto is_location = [&](const std::string& n) {
    return std::find(suite.world.locations.begin(), suite.world.locations.end(), n) !=
           suite.world.locations.end();
  };
  if (auto it = w.find("doors"); it != w.end()) {
    for (std::size_t i = 0; i < it->size(); ++i) {
      std::string f = "world.doors[" + std::to_string(i) + "]";
      const auto& d = (*it)[i];
      check_keys(d, f, {"between", "open"});
      auto between = get_strings(d, f, "between");
      if (between.size() != 2 || !is_location(between[0]) || !is_location(between[1]) ||
          between[0] == between[1]) {
        fail(f + ".between", "expected two distinct known locations");
      }
      suite.world.doors.push_back({between[0], between[1], get_or(d, f, "open", false)});
    }
  }
  if (auto it = w.find("fixtures"); it != w.end()) {
    for (std::size_t i = 0; i < it->size(); ++i) {
      suite.world.fixtures.push_back(
          parse_object((*it)[i], "world.fixtures[" + std::to_string(i) + "]", true));
    }
  }
  if (auto it = w.find("distractors"); it != w.end()) {
    for (std::size_t i = 0; i < it->size(); ++i) {
      suite.world.distractors.push_back(
          parse_object((*it)[i], "world.distractors[" + std::to_string(i) + "]", false));
    }
  }
  suite.world.distractors_per_room = get_or(w, "world", "distractors_per_room", 0);
  if (suite.world.distractors_per_room < 0) fail("world.distractors_per_room", "must be >= 0");

  const auto& tasks = require(root, "suite", "tasks");
  if (!tasks.is_array()) fail("tasks", "expected an array");
  if (tasks.empty()) fail("tasks", "suite has no task types");
  std::set<std::string> ids;
  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    std::string f = "tasks[" + std::to_string(ti) + "]";
    const auto& t = tasks[ti];
    check_keys(t, f, {"task_type_id", "theme", "description_template", "objects", "milestones",
                      "variations"});
    TaskSpec spec;
    spec.task_type_id = get_string(t, f, "task_type_id");
    if (!ids.insert(spec.task_type_id).second) fail(f + ".task_type_id", "duplicate id");
    spec.theme = get_string(t, f, "theme");
    spec.description_template = get_string(t, f, "description_template");
    if (auto it = t.find("objects"); it != t.end()) {
      for (std::size_t i = 0; i < it->size(); ++i) {
        spec.object_templates.push_back(
            parse_object((*it)[i], f + ".objects[" + std::to_string(i) + "]", true));
      }
    }
    const auto& ms = require(t, f, "milestones");
    if (!ms.is_array() || ms.empty()) fail(f + ".milestones", "expected a non-empty array");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      spec.milestone_templates.push_back(
          parse_milestone(ms[i], f + ".milestones[" + std::to_string(i) + "]"));
    }
    {
      int total = 0;
      for (const auto& m : spec.milestone_templates) total += m.points;
      if (total != 100) {
        fail(f + ".milestones", "points sum to " + std::to_string(total) + ", expected 100");
      }
    }
    const auto& vs = require(t, f, "variations");
    if (!vs.is_array() || vs.empty()) fail(f + ".variations", "expected a non-empty array");
    if (vs.size() < req.min_variations) {
      fail(f + ".variations", "has " + std::to_string(vs.size()) + " variations, need " +
                                  std::to_string(req.min_variations));
    }
    for (std::size_t vi = 0; vi < vs.size(); ++vi) {
      std::string vf = f + ".variations[" + std::to_string(vi) + "]";
      const auto& vj = vs[vi];
      check_keys(vj, vf, {"params", "start", "objects", "open_doors"});
      VariationSpec v;
      v.id = static_cast<int>(vi);
      if (auto it = vj.find("params"); it != vj.end()) {
        if (!it->is_object()) fail(vf + ".params", "expected an object");
        for (auto p = it->begin(); p != it->end(); ++p) {
          if (!p->is_string()) fail(vf + ".params." + p.key(), "expected a string");
          v.params[p.key()] = p->get<std::string>();
        }
      }
      v.start = get_string(vj, vf, "start");
      if (auto it = vj.find("objects"); it != vj.end()) {
        for (std::size_t i = 0; i < it->size(); ++i) {
          v.objects.push_back(parse_object((*it)[i], vf + ".objects[" + std::to_string(i) + "]", true));
        }
      }
      if (auto it = vj.find("open_doors"); it != vj.end()) {
        for (std::size_t i = 0; i < it->size(); ++i) {
          const auto& d = (*it)[i];
          if (!d.is_array() || d.size() != 2 || !d[0].is_string() || !d[1].is_string()) {
            fail(vf + ".open_doors[" + std::to_string(i) + "]", "expected [location, location]");
          }
          v.open_doors.emplace_back(d[0].get<std::string>(), d[1].get<std::string>());
        }
      }
      resolve_variation(suite.world, spec, v, vf);
      spec.variations.push_back(std::move(v));
    }
    suite.tasks.push_back(std::move(spec));
  }

  if (suite.tasks.size() < req.min_task_types) {
    fail("tasks", "has " + std::to_string(suite.tasks.size()) + " task types, need " +
                      std::to_string(req.min_task_types));
  }
  if (suite.themes().size() < req.min_themes) {
    fail("tasks", "spans " + std::to_string(suite.themes().size()) + " themes, need " +
                      std::to_string(req.min_themes));
  }
  return suite;
}

TaskSuite load_task_suite(const std::filesystem::path& path, const SuiteRequirements& req) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open task-suite file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_task_suite(ss.str(), req);
}

}  // namespace subgoal::world
