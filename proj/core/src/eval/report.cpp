#include "subgoal/eval/report.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "subgoal/common/errors.hpp"

namespace subgoal::eval {

using nlohmann::ordered_json;

std::string_view to_string(LengthGroup g) {
  switch (g) {
    case LengthGroup::short_: return "short";
    case LengthGroup::medium: return "medium";
    case LengthGroup::long_: return "long";
  }
  return "short";
}

LengthGroup classify_length(double expert_length) {
  if (expert_length < 20.0) return LengthGroup::short_;
  if (expert_length <= 50.0) return LengthGroup::medium;
  return LengthGroup::long_;
}

LengthGroups group_by_length(const std::map<std::string, TaskReport>& per_task) {
  double sum[3] = {0, 0, 0};
  int count[3] = {0, 0, 0};
  for (const auto& [_, t] : per_task) {
    auto g = static_cast<int>(classify_length(t.expert_length_avg));
    sum[g] += t.avg_score;
    ++count[g];
  }
  auto mean = [&](int g) -> std::optional<double> {
    if (count[g] == 0) return std::nullopt;
    return sum[g] / count[g];
  };
  return {mean(0), mean(1), mean(2)};
}

void finalize(EvalReport& report) {
  double sum = 0.0;
  int solved = 0;
  for (const auto& [_, t] : report.per_task) {
    sum += t.avg_score;
    bool all = !t.per_variation.empty();
    for (const auto& v : t.per_variation) all = all && v.score == 100;
    solved += all ? 1 : 0;
  }
  report.overall_avg = report.per_task.empty() ? 0.0 : sum / static_cast<double>(report.per_task.size());
  report.solved_count = solved;
  report.length_groups = group_by_length(report.per_task);
}

ReportFormat format_from_string(std::string_view s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  if (s == "markdown" || s == "md") return ReportFormat::markdown;
  throw ConfigError("unknown report format '" + std::string(s) + "' (expected json|csv|markdown)");
}

std::string_view extension(ReportFormat f) {
  switch (f) {
    case ReportFormat::json: return ".json";
    case ReportFormat::csv: return ".csv";
    case ReportFormat::markdown: return ".md";
  }
  return ".json";
}

namespace {

ordered_json optional_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::optional<double> optional_from(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

std::string to_json(const EvalReport& r) {
  ordered_json j;
  j["schema_version"] = r.schema_version;
  j["agent"] = r.agent;
  j["split"] = r.split;
  j["noise"] = r.noise;
  ordered_json tasks = ordered_json::object();
  for (const auto& [name, t] : r.per_task) {
    ordered_json vars = ordered_json::array();
    for (const auto& v : t.per_variation) {
      vars.push_back({{"variation", v.variation},
                      {"score", v.score},
                      {"steps", v.steps},
                      {"reason", std::string(world::to_string(v.reason))},
                      {"expert_length", v.expert_length},
                      {"error", v.error}});
    }
    tasks[name] = {{"avg_score", t.avg_score}, {"expert_length_avg", t.expert_length_avg}, {"per_variation", vars}};
  }
  j["per_task"] = tasks;
  j["overall_avg"] = r.overall_avg;
  j["solved_count"] = r.solved_count;
  j["length_groups"] = {{"short", optional_json(r.length_groups.short_)},
                        {"medium", optional_json(r.length_groups.medium)},
                        {"long", optional_json(r.length_groups.long_)}};
  return j.dump(2) + "\n";
}

EvalReport report_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("report is not JSON: ") + e.what(), e.byte, std::string(text));
  }
  try {
    EvalReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw ParseError("unsupported report schema_version " + std::to_string(r.schema_version));
    }
    r.agent = j.at("agent").get<std::string>();
    r.split = j.at("split").get<std::string>();
    r.noise = j.at("noise").get<std::string>();
    for (const auto& [name, t] : j.at("per_task").items()) {
      TaskReport tr;
      tr.avg_score = t.at("avg_score").get<double>();
      tr.expert_length_avg = t.at("expert_length_avg").get<double>();
      for (const auto& v : t.at("per_variation")) {
        VariationResult vr;
        vr.variation = v.at("variation").get<int>();
        vr.score = v.at("score").get<int>();
        vr.steps = v.at("steps").get<int>();
        vr.reason = world::termination_from_string(v.at("reason").get<std::string>());
        vr.expert_length = v.at("expert_length").get<int>();
        vr.error = v.at("error").get<std::string>();
        tr.per_variation.push_back(std::move(vr));
      }
      r.per_task.emplace(name, std::move(tr));
    }
    r.overall_avg = j.at("overall_avg").get<double>();
    r.solved_count = j.at("solved_count").get<int>();
    const auto& g = j.at("length_groups");
    r.length_groups = {optional_from(g.at("short")), optional_from(g.at("medium")), optional_from(g.at("long"))};
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

std::string format_percent(std::optional<double> value) {
  if (!value) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *value);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "task_type,variation,score,steps,reason\n";
  for (const auto& [name, t] : r.per_task) {
    for (const auto& v : t.per_variation) {
      out << csv_field(name) << ',' << v.variation << ',' << v.score << ',' << v.steps << ','
          << world::to_string(v.reason) << '\n';
    }
  }
  for (const auto& [name, t] : r.per_task) {
    out << csv_field(name) << ",average," << format_percent(t.avg_score) << ",,\n";
  }
  out << "Overall Average,," << format_percent(r.overall_avg) << ",,\n";
  out << "Solved Task Types,," << r.solved_count << ",,\n";
  out << "Short,," << format_percent(r.length_groups.short_) << ",,\n";
  out << "Medium,," << format_percent(r.length_groups.medium) << ",,\n";
  out << "Long,," << format_percent(r.length_groups.long_) << ",,\n";
  return out.str();
}

std::string to_markdown(const EvalReport& r) {
  std::ostringstream out;
  out << "| Task Type | Score | Expert Length |\n";
  out << "|---|---:|---:|\n";
  for (const auto& [name, t] : r.per_task) {
    char len[32];
    std::snprintf(len, sizeof len, "%.1f", t.expert_length_avg);
    out << "| " << name << " | " << format_percent(t.avg_score) << " | " << len << " |\n";
  }
  out << "| Overall Average | " << format_percent(r.overall_avg) << " | |\n";
  out << "| Solved Task Types | " << r.solved_count << "/" << r.per_task.size() << " | |\n";
  out << "| Short (< 20) | " << format_percent(r.length_groups.short_) << " | |\n";
  out << "| Medium (20 to 50) | " << format_percent(r.length_groups.medium) << " | |\n";
  out << "| Long (> 50) | " << format_percent(r.length_groups.long_) << " | |\n";
  return out.str();
}

std::string render(const EvalReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::json: return to_json(report);
    case ReportFormat::csv: return to_csv(report);
    case ReportFormat::markdown: return to_markdown(report);
  }
  return to_json(report);
}

void export_report(const EvalReport& report, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << render(report, format);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace subgoal::eval
