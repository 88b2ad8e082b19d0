#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subgoal/world/types.hpp"

namespace subgoal::eval {

inline constexpr int kReportSchemaVersion = 1;

struct VariationResult {
  int variation = 0;
  int score = 0;
  int steps = 0;
  world::TerminationReason reason = world::TerminationReason::none;
  int expert_length = 0;
  std::string error;

  friend bool operator==(const VariationResult&, const VariationResult&) = default;
};

struct TaskReport {
  double avg_score = 0.0;
  std::vector<VariationResult> per_variation;
  double expert_length_avg = 0.0;

  friend bool operator==(const TaskReport&, const TaskReport&) = default;
};

enum class LengthGroup { short_, medium, long_ };

std::string_view to_string(LengthGroup g);
// Below 20 actions is short, 20 to 50 inclusive is medium, above 50 long.
LengthGroup classify_length(double expert_length);

// Unweighted mean of member task averages; nullopt for an empty group.
struct LengthGroups {
  std::optional<double> short_;
  std::optional<double> medium;
  std::optional<double> long_;

  friend bool operator==(const LengthGroups&, const LengthGroups&) = default;
};

struct EvalReport {
  int schema_version = kReportSchemaVersion;
  std::string agent;
  std::string split;
  std::string noise;  // empty without noise
  std::map<std::string, TaskReport> per_task;
  double overall_avg = 0.0;
  int solved_count = 0;
  LengthGroups length_groups;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

LengthGroups group_by_length(const std::map<std::string, TaskReport>& per_task);

// Fills overall_avg, solved_count and length_groups from per_task.
void finalize(EvalReport& report);

enum class ReportFormat { json, csv, markdown };
ReportFormat format_from_string(std::string_view s);
std::string_view extension(ReportFormat f);

std::string to_json(const EvalReport& report);
// Throws ParseError on malformed input or an unknown schema version.
EvalReport report_from_json(std::string_view text);
// task_type,variation,score,steps,reason rows, then per-task averages and
// the summary rows.
std::string to_csv(const EvalReport& report);
// One row per task type followed by Overall Average, Solved Task Types and
// the three length groups.
std::string to_markdown(const EvalReport& report);

std::string render(const EvalReport& report, ReportFormat format);
// Throws IoError naming the path.
void export_report(const EvalReport& report, ReportFormat format, const std::filesystem::path& path);

// Two decimals, "n/a" for nullopt.
std::string format_percent(std::optional<double> value);

}  // namespace subgoal::eval
