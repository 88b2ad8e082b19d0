#pragma once

#include <cstddef>
#include <filesystem>
#include <string_view>

#include "subgoal/world/types.hpp"

namespace subgoal::world {

struct SuiteRequirements {
  std::size_t min_task_types = 1;
  std::size_t min_themes = 1;
  std::size_t min_variations = 1;
};

// The bundled desk-scale suite must satisfy these.
inline constexpr SuiteRequirements kBundledSuiteRequirements{6, 3, 8};

// Loads and validates a task-suite JSON file. Every variation is resolved
// (parameters substituted, predicates parsed) so later stages never see an
// unresolved template. Throws ConfigError naming the offending field.
TaskSuite load_task_suite(const std::filesystem::path& path,
                          const SuiteRequirements& req = {});

TaskSuite parse_task_suite(std::string_view json_text, const SuiteRequirements& req = {});

}  // namespace subgoal::world
