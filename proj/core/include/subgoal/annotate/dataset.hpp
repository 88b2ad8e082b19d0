#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "subgoal/annotate/types.hpp"

namespace subgoal::annotate {

// One JSONL line: {"input", "target", "task_type", "variation", "step"}.
struct DatasetRow {
  std::string input;
  std::string target;
  std::string task_type;
  int variation = 0;
  int step = 0;

  friend bool operator==(const DatasetRow&, const DatasetRow&) = default;
};

std::vector<DatasetRow> to_rows(const std::vector<StepRecord>& records, Role role);

// Writes rows in the given order and returns the count. Throws IoError with
// the path on failure.
std::size_t write_dataset(const std::vector<StepRecord>& records, Role role, const std::filesystem::path& path);
std::size_t write_rows(const std::vector<DatasetRow>& rows, const std::filesystem::path& path);

// Throws IoError if the file cannot be read and ParseError naming the line
// for malformed content.
std::vector<DatasetRow> read_dataset(const std::filesystem::path& path);

}  // namespace subgoal::annotate
