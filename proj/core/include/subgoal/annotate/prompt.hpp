#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "subgoal/annotate/types.hpp"
#include "subgoal/common/chat_client.hpp"

namespace subgoal::annotate {

// Environment description opening every annotation prompt. Lists the
// action templates and the given locations.
std::string environment_preamble(const std::vector<std::string>& locations);

// "<task>\nHere is the goal path ...: a, b\n<instruction>" and, when the
// example carries segments, the numbered sub-goal listing.
std::string render_example_block(const PromptExample& example);
std::string render_query_block(const PromptExample& query);

// Both examples must satisfy concatenate(segments) == actions; exactly two
// are required. Throws PreconditionError otherwise.
TeacherRequest build_annotation_prompt(const std::string& preamble,
                                       const std::vector<PromptExample>& examples,
                                       const PromptExample& query);

// system = preamble; user = "Example 1\n...\n\nExample 2\n...\n\n<query>".
std::vector<ChatMessage> prompt_messages(const TeacherRequest& request);

// Recovers task description and actions from a rendered query block.
// Throws ParseError if the block does not have the expected shape.
PromptExample parse_query_block(std::string_view query);

// "1- name(args): {'a', 'b'}" listing for a segmentation.
std::string render_segments(const std::vector<SubGoalSegment>& segments);

struct ParsedResponse {
  std::vector<SubGoalSegment> segments;
  std::vector<std::string> warnings;
};

// Tolerant scan for `N- name(args): {'a1', 'a2'}` entries anywhere in the
// text (one per line or run together). Accepts `\_` escapes, missing
// numbering and either quote style. Throws ParseError carrying the raw text
// when nothing parses.
ParsedResponse parse_subgoal_response(std::string_view text);

}  // namespace subgoal::annotate
