#include "subgoal/annotate/prompt.hpp"

#include <regex>

#include "subgoal/common/errors.hpp"
#include "subgoal/common/text.hpp"

namespace subgoal::annotate {

namespace {

constexpr std::string_view kGoalPath = "Here is the goal path to achieve to the goal: ";
constexpr std::string_view kInstruction =
    "Based on the given goal path, provide me with the functional format of high-level sub-tasks "
    "to complete this task and their corresponding actions.";

std::string quote_actions(const std::vector<std::string>& actions) {
  std::vector<std::string> quoted;
  for (const auto& a : actions) quoted.push_back("'" + a + "'");
  return "{" + join(quoted, ", ") + "}";
}

}  // namespace

std::string environment_preamble(const std::vector<std::string>& locations) {
  std::string out =
      "You are a helpful assistant. You are in a simulated environment as an agent. "
      "You will be shown a task description and an expert trajectory that completes it. "
      "Group the trajectory into high-level sub-tasks written as function calls such as "
      "navigate_to(kitchen) or pick_up(cup), and list the actions that belong to each sub-task "
      "in order. Every action of the trajectory must appear exactly once. "
      "The agent can use these actions, where OBJ is an object and LOC is a location: ";
  std::vector<std::string> patterns;
  for (const auto& t : world::action_templates()) patterns.emplace_back(t.pattern);
  out += join(patterns, ", ") + ".";
  if (!locations.empty()) {
    out += " There are " + std::to_string(locations.size()) + " locations: " + join(locations, ", ") + ".";
  }
  return out;
}

std::string render_segments(const std::vector<SubGoalSegment>& segments) {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out += "\n";
    out += std::to_string(i + 1) + "- " + segments[i].subgoal.surface() + ": " +
           quote_actions(segments[i].actions);
  }
  return out;
}

std::string render_query_block(const PromptExample& query) {
  return query.task_description + "\n" + std::string(kGoalPath) + join(query.actions, ", ") + "\n" +
         std::string(kInstruction);
}

std::string render_example_block(const PromptExample& example) {
  std::string out = render_query_block(example);
  if (!example.segments.empty()) out += "\n" + render_segments(example.segments);
  return out;
}

TeacherRequest build_annotation_prompt(const std::string& preamble,
                                       const std::vector<PromptExample>& examples,
                                       const PromptExample& query) {
  if (examples.size() != 2) {
    throw PreconditionError("annotation prompts need exactly 2 examples, got " +
                            std::to_string(examples.size()));
  }
  TeacherRequest req;
  req.system_preamble = preamble;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    if (ex.segments.empty() || concatenate(ex.segments) != ex.actions) {
      throw PreconditionError("example " + std::to_string(i + 1) +
                              ": segments do not concatenate to its trajectory");
    }
    req.examples.push_back(render_example_block(ex));
  }
  req.query = render_query_block(query);
  req.temperature = 0.0;
  return req;
}

std::vector<ChatMessage> prompt_messages(const TeacherRequest& request) {
  std::string user;
  for (std::size_t i = 0; i < request.examples.size(); ++i) {
    user += "Example " + std::to_string(i + 1) + "\n" + request.examples[i] + "\n\n";
  }
  user += request.query;
  return {{"system", request.system_preamble}, {"user", user}};
}

PromptExample parse_query_block(std::string_view query) {
  auto lines = split(query, "\n");
  if (lines.size() < 2) throw ParseError("query block has fewer than 2 lines", 0, std::string(query));
  PromptExample out;
  out.task_description = lines[0];
  if (!starts_with(lines[1], kGoalPath)) {
    throw ParseError("query block is missing the goal path line", lines[0].size() + 1, std::string(query));
  }
  std::string path = lines[1].substr(kGoalPath.size());
  if (!trim(path).empty()) {
    for (auto& a : split(path, ", ")) out.actions.push_back(trim(a));
  }
  return out;
}

ParsedResponse parse_subgoal_response(std::string_view text) {
  static const std::regex entry(
      R"((?:\d+\s*[-.)]\s*)?([A-Za-z_\\][A-Za-z0-9_\\]*)\s*\(([^(){}]*)\)\s*:\s*\{([^{}]*)\})");
  static const std::regex quoted(R"('([^']*)'|"([^"]*)\")");

  ParsedResponse out;
  const std::string raw(text);
  std::size_t cursor = 0;
  auto note_skipped = [&](std::size_t from, std::size_t to) {
    std::string skipped = trim(std::string_view(raw).substr(from, to - from));
    if (!skipped.empty()) out.warnings.push_back("skipped unparseable text: " + skipped);
  };

  for (auto it = std::sregex_iterator(raw.begin(), raw.end(), entry); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    note_skipped(cursor, static_cast<std::size_t>(m.position(0)));
    cursor = static_cast<std::size_t>(m.position(0) + m.length(0));

    auto sg = parse_subgoal(m[1].str() + "(" + m[2].str() + ")");
    if (!sg) {
      out.warnings.push_back("skipped malformed sub-goal: " + m[0].str());
      continue;
    }
    SubGoalSegment seg{*sg, {}};
    const std::string body = m[3].str();
    for (auto q = std::sregex_iterator(body.begin(), body.end(), quoted); q != std::sregex_iterator(); ++q) {
      std::string action = trim((*q)[1].matched ? (*q)[1].str() : (*q)[2].str());
      if (!action.empty()) seg.actions.push_back(std::move(action));
    }
    out.segments.push_back(std::move(seg));
  }
  note_skipped(cursor, raw.size());

  if (out.segments.empty()) {
    throw ParseError("teacher response contains no sub-goal entries", 0, raw);
  }
  return out;
}

}  // namespace subgoal::annotate
