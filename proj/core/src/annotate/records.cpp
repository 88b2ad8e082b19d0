#include "subgoal/annotate/records.hpp"

#include <charconv>

#include "subgoal/common/errors.hpp"
#include "subgoal/common/text.hpp"

namespace subgoal::annotate {

namespace {

constexpr std::string_view kSep = " </s> ";
constexpr std::string_view kSepSemi = " </s>; ";
constexpr std::string_view kActionQuestion = "What action should you do next? </s>";
constexpr std::string_view kSubgoalQuestion = "What subtask should you do next? </s>";
constexpr std::string_view kNone = "none";

std::string render_optional(const std::optional<SubGoal>& sg) {
  return sg ? sg->surface() : std::string(kNone);
}

std::string render_delta(int d) { return d < 0 ? "(" + std::to_string(d) + ")" : "(+" + std::to_string(d) + ")"; }

// Cursor over the rendered text; every failure reports its byte offset.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void expect(std::string_view literal) {
    if (text_.substr(pos_, literal.size()) != literal) fail("expected '" + std::string(literal) + "'");
    pos_ += literal.size();
  }

  bool peek(std::string_view literal) const { return text_.substr(pos_, literal.size()) == literal; }

  // Text up to the next occurrence of `delim`; the delimiter is consumed.
  std::string until(std::string_view delim) {
    auto at = text_.find(delim, pos_);
    if (at == std::string_view::npos) fail("missing '" + std::string(delim) + "'");
    std::string out(text_.substr(pos_, at - pos_));
    pos_ = at + delim.size();
    return out;
  }

  int integer() {
    int value = 0;
    const char* begin = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
    if (ec != std::errc()) fail("expected an integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  bool done() const { return pos_ == text_.size(); }
  std::size_t pos() const { return pos_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("record input: " + what + " at offset " + std::to_string(pos_), pos_, std::string(text_));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::optional<SubGoal> parse_optional(std::string_view text) {
  return parse_subgoal_lenient(text);
}

}  // namespace

std::string display_observation(std::string_view action, std::string_view observation) {
  if (trim(action) == "look around" || trim(observation).empty()) return "N/A";
  if (observation.find_first_of("|<\n\r") != std::string_view::npos) return "N/A";
  return std::string(observation);
}

std::string task_desc_of(std::string_view goal_text) {
  std::string t = trim(goal_text);
  while (!t.empty() && t.back() == '.') t.pop_back();
  return t;
}

std::string render_subgoal_list(const std::vector<SubGoal>& list) {
  if (list.empty()) return std::string(kNone);
  std::vector<std::string> parts;
  for (const auto& sg : list) parts.push_back(sg.surface());
  return join(parts, ", ");
}

std::vector<SubGoal> parse_subgoal_list(std::string_view text) {
  std::vector<SubGoal> out;
  if (trim(text) == kNone) return out;
  for (const auto& part : split_top_level(text)) {
    if (auto sg = parse_subgoal_lenient(part)) out.push_back(*sg);
  }
  return out;
}

std::string render_input(const PromptContext& c, Role role) {
  std::string out = c.task_desc + "; Time: " + std::to_string(c.time) + "; Score: " + std::to_string(c.score) +
                    ";" + std::string(kSep);
  if (role == Role::action) {
    out += "Completed subtasks are: ";
  } else {
    out += "The previous subtasks are: ";
  }
  out += render_subgoal_list(c.completed) + ". The current subtask is " + render_optional(c.current) + ";" +
         std::string(kSep);
  out += "Action history: ";
  const std::size_t n = c.history.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& h = c.history[i];
    out += "<extra_id_" + std::to_string(n - i) + "> " + h.action + " " + render_delta(h.delta) + " --> " +
           h.observation + " | ";
  }
  out += "</s> ";
  out += c.room_text + std::string(kSepSemi) + c.inventory_text + std::string(kSepSemi) + c.visited_text +
         std::string(kSepSemi);
  out += role == Role::action ? kActionQuestion : kSubgoalQuestion;
  return out;
}

PromptContext parse_input(std::string_view text, Role role) {
  Cursor cur(text);
  PromptContext c;
  c.task_desc = cur.until("; Time: ");
  c.time = cur.integer();
  cur.expect("; Score: ");
  c.score = cur.integer();
  cur.expect(";");
  cur.expect(kSep);
  cur.expect(role == Role::action ? "Completed subtasks are: " : "The previous subtasks are: ");
  c.completed = parse_subgoal_list(cur.until(". The current subtask is "));
  c.current = parse_optional(cur.until(";" + std::string(kSep)));
  cur.expect("Action history: ");
  std::size_t expected_marker = 0;
  bool first = true;
  while (cur.peek("<extra_id_")) {
    cur.expect("<extra_id_");
    int marker = cur.integer();
    if (first) {
      expected_marker = static_cast<std::size_t>(marker);
      first = false;
    }
    if (marker < 1 || static_cast<std::size_t>(marker) != expected_marker) cur.fail("history markers out of order");
    --expected_marker;
    cur.expect("> ");
    HistoryEntry h;
    // The action ends at the delta marker; surfaces never contain " (+" or " (-".
    std::string rest = cur.until(" --> ");
    auto open = rest.rfind(" (");
    if (open == std::string::npos || rest.back() != ')') cur.fail("malformed history delta");
    h.action = rest.substr(0, open);
    std::string delta = rest.substr(open + 2, rest.size() - open - 3);
    if (!delta.empty() && delta[0] == '+') delta.erase(0, 1);
    auto [ptr, ec] = std::from_chars(delta.data(), delta.data() + delta.size(), h.delta);
    if (ec != std::errc() || ptr != delta.data() + delta.size()) cur.fail("malformed history delta");
    h.observation = cur.until(" | ");
    c.history.push_back(std::move(h));
  }
  if (expected_marker != 0) cur.fail("history markers do not count down to 1");
  cur.expect("</s> ");
  c.room_text = cur.until(kSepSemi);
  c.inventory_text = cur.until(kSepSemi);
  c.visited_text = cur.until(kSepSemi);
  cur.expect(role == Role::action ? kActionQuestion : kSubgoalQuestion);
  if (!cur.done()) cur.fail("trailing text");
  return c;
}

PromptContext context_for(const StepRecord& r, Role role) {
  PromptContext c;
  c.task_desc = r.task_desc;
  c.time = r.time;
  c.score = r.score;
  if (role == Role::action) {
    c.completed = r.completed_subgoals;
    c.current = r.current_subgoal;
  } else {
    c.completed = r.prior_completed;
    c.current = r.prior_subgoal;
  }
  c.history = r.history;
  c.room_text = r.room_text;
  c.inventory_text = r.inventory_text;
  c.visited_text = r.visited_text;
  return c;
}

SerializedRecord serialize_record(const StepRecord& record, Role role) {
  return {render_input(context_for(record, role), role),
          role == Role::action ? record.target_action : record.target_subgoal};
}

PromptContext parse_record(std::string_view input, Role role) { return parse_input(input, role); }

std::vector<StepRecord> build_step_records(const AnnotatedTrajectory& annotated, const world::Engine& engine) {
  const auto& goal = annotated.task;
  const auto& task = engine.suite().task(goal.task_type_id);
  auto [state, fresh_goal] = engine.instantiate(task, goal.variation_id, 0);
  const std::string desc = task_desc_of(fresh_goal.text.str());
  const std::string where = "task '" + goal.task_type_id + "' variation " + std::to_string(goal.variation_id);

  std::vector<SubGoal> per_action;
  for (const auto& seg : annotated.segments) {
    for (std::size_t k = 0; k < seg.actions.size(); ++k) per_action.push_back(seg.subgoal);
  }
  if (per_action.size() != annotated.expert.size() || concatenate(annotated.segments) != annotated.expert) {
    throw DataError(where + ": segments do not cover the expert trajectory");
  }

  std::vector<StepRecord> out;
  std::vector<HistoryEntry> history;
  std::vector<SubGoal> completed;
  std::optional<SubGoal> current;
  for (std::size_t t = 0; t < annotated.expert.size(); ++t) {
    StepRecord r;
    r.task_type_id = goal.task_type_id;
    r.variation_id = goal.variation_id;
    r.task_desc = desc;
    r.time = static_cast<int>(t);
    r.score = state.cumulative_score;
    r.prior_completed = completed;
    r.prior_subgoal = current;
    if (!current || *current != per_action[t]) {
      if (current) completed.push_back(*current);
      current = per_action[t];
    }
    r.completed_subgoals = completed;
    r.current_subgoal = current;
    auto first = history.size() > kHistoryWindow ? history.end() - static_cast<std::ptrdiff_t>(kHistoryWindow)
                                                 : history.begin();
    r.history.assign(first, history.end());
    r.room_text = world::render_room(state);
    r.inventory_text = world::render_inventory(state);
    r.visited_text = world::render_visited(state);
    r.target_action = annotated.expert[t];
    r.target_subgoal = per_action[t].surface();

    if (state.done) throw DataError(where + ": episode ended before step " + std::to_string(t));
    auto [next, obs] = engine.step(state, annotated.expert[t]);
    if (obs.text.str() == world::kUnparseable) {
      throw DataError(where + ": step " + std::to_string(t) + " action '" + annotated.expert[t] +
                      "' no longer executes");
    }
    history.push_back({annotated.expert[t], obs.score_delta, display_observation(annotated.expert[t], obs.text.str())});
    state = std::move(next);
    out.push_back(std::move(r));
  }
  if (state.cumulative_score != 100) {
    throw DataError(where + ": replay ends with score " + std::to_string(state.cumulative_score));
  }
  return out;
}

}  // namespace subgoal::annotate
