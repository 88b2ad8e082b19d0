#include "subgoal/annotate/dataset.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "subgoal/annotate/records.hpp"
#include "subgoal/common/errors.hpp"

namespace subgoal::annotate {

std::vector<DatasetRow> to_rows(const std::vector<StepRecord>& records, Role role) {
  std::vector<DatasetRow> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    auto s = serialize_record(r, role);
    rows.push_back({std::move(s.input), std::move(s.target), r.task_type_id, r.variation_id, r.time});
  }
  return rows;
}

std::size_t write_rows(const std::vector<DatasetRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const auto& row : rows) {
    nlohmann::ordered_json j;
    j["input"] = row.input;
    j["target"] = row.target;
    j["task_type"] = row.task_type;
    j["variation"] = row.variation;
    j["step"] = row.step;
    out << j.dump() << '\n';
  }
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
  return rows.size();
}

std::size_t write_dataset(const std::vector<StepRecord>& records, Role role, const std::filesystem::path& path) {
  return write_rows(to_rows(records, role), path);
}

std::vector<DatasetRow> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<DatasetRow> rows;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    const std::string where = path.string() + " line " + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(where + ": malformed JSON (" + e.what() + ")", e.byte, line);
    }
    try {
      rows.push_back({j.at("input").get<std::string>(), j.at("target").get<std::string>(),
                      j.at("task_type").get<std::string>(), j.at("variation").get<int>(), j.at("step").get<int>()});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where + ": " + e.what(), 0, line);
    }
  }
  if (in.bad()) throw IoError("read from '" + path.string() + "' failed");
  return rows;
}

}  // namespace subgoal::annotate
