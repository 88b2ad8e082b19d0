#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "subgoal/world/engine.hpp"
#include "subgoal/world/suite.hpp"

namespace fixtures {

using nlohmann::json;

inline const char* bundled_suite_path() { return SUBGOAL_TEST_SUITE; }

inline std::shared_ptr<const subgoal::world::TaskSuite> bundled_suite() {
  static const auto suite = std::make_shared<const subgoal::world::TaskSuite>(
      subgoal::world::load_task_suite(bundled_suite_path(), subgoal::world::kBundledSuiteRequirements));
  return suite;
}

inline const subgoal::world::Engine& bundled_engine() {
  static const subgoal::world::Engine engine(bundled_suite());
  return engine;
}

// hallway - greenhouse - outside - kitchen, with a foundry off the outside.
inline json small_world() {
  auto door = [](const char* a, const char* b) { return json{{"between", {a, b}}, {"open", false}}; };
  return json{
      {"locations", {"foundry", "greenhouse", "hallway", "kitchen", "outside"}},
      {"doors",
       {door("hallway", "greenhouse"), door("greenhouse", "outside"), door("outside", "kitchen"),
        door("outside", "foundry")}},
      {"fixtures",
       {json{{"name", "ground"}, {"in", "outside"}, {"article", "the"}, {"portable", false}},
        json{{"name", "water"}, {"in", "outside"}, {"substance", true}},
        json{{"name", "fountain"}, {"in", "outside"}, {"portable", false}, {"container", true}},
        json{{"name", "coin"}, {"in", "fountain"}}}},
      {"distractors", json::array()},
      {"distractors_per_room", 0},
  };
}

// A find task whose gold plan is: open door to greenhouse, go to greenhouse,
// open door to outside, go to outside, focus on dove, pick up dove, open door
// to kitchen, go to kitchen, move dove to <box>.
inline json dove_task(int variations = 8, const std::string& id = "find-living-thing") {
  static const char* boxes[] = {"red box", "green box", "blue box", "orange box"};
  json vs = json::array();
  for (int i = 0; i < variations; ++i) {
    vs.push_back(json{{"params", {{"box", boxes[i % 4]}}}, {"start", "hallway"}});
  }
  return json{
      {"task_type_id", id},
      {"theme", "classification"},
      {"description_template",
       "Your task is to find a(n) living thing. First, focus on the thing. Then, move it to the ${box} in the kitchen."},
      {"objects",
       {json{{"name", "dove"}, {"in", "outside"}, {"living", true}},
        json{{"name", "${box}"}, {"in", "kitchen"}, {"portable", false}, {"container", true}}}},
      {"milestones",
       {json{{"predicate", "at(greenhouse)"}, {"points", 10}, {"subgoal", "navigate_to(greenhouse)"}},
        json{{"predicate", "at(outside)"}, {"points", 10}, {"subgoal", "navigate_to(outside)"}},
        json{{"predicate", "focused(dove)"}, {"points", 30}, {"subgoal", "Focus_on(dove)"}},
        json{{"predicate", "holding(dove)"}, {"points", 10}, {"subgoal", "pick_up(dove)"}},
        json{{"predicate", "at(kitchen)"}, {"points", 10}, {"subgoal", "navigate_to(kitchen)"}},
        json{{"predicate", "in(dove, ${box})"}, {"points", 30}, {"subgoal", "move(dove, ${box})"}}}},
      {"variations", vs},
  };
}

inline json suite_with(json tasks, json world = small_world()) {
  return json{{"schema_version", 1}, {"world", std::move(world)}, {"tasks", std::move(tasks)}};
}

inline std::shared_ptr<const subgoal::world::TaskSuite> parse(const json& suite) {
  return std::make_shared<const subgoal::world::TaskSuite>(subgoal::world::parse_task_suite(suite.dump()));
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("subgoal-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    auto p = file(name);
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace fixtures
