#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>

#include "subgoal/agent/context.hpp"
#include "subgoal/agent/episode.hpp"
#include "subgoal/agent/repair.hpp"
#include "subgoal/annotate/annotate.hpp"
#include "subgoal/annotate/dataset.hpp"
#include "subgoal/annotate/records.hpp"
#include "subgoal/common/errors.hpp"
#include "subgoal/common/text.hpp"
#include "subgoal/eval/evaluate.hpp"
#include "subgoal/world/engine.hpp"
#include "subgoal/world/suite.hpp"

#ifndef SUBGOAL_DEFAULT_SUITE
#define SUBGOAL_DEFAULT_SUITE "data/suite.json"
#endif

namespace subgoal::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = 0;
constexpr const char* kActionFile = "action.jsonl";
constexpr const char* kSubgoalFile = "subgoal.jsonl";

// Thrown for bad flag combinations; maps to the usage exit code.
struct UsageError : Error {
  using Error::Error;
};

struct EndpointFlags {
  std::string url;
  std::string model;

  std::optional<ChatEndpoint> endpoint() const {
    if (url.empty() && model.empty()) return std::nullopt;
    ChatEndpoint e;
    e.url = url;
    e.model = model;
    return e;
  }
};

// Values shared by every command, filled from an optional JSON config file
// and then overridden by flags.
struct CliConfig {
  std::string suite_path = SUBGOAL_DEFAULT_SUITE;
  std::string output_dir = ".";
  std::uint64_t seed = kDefaultSeed;
  std::string config_path;
  EndpointFlags teacher;
  EndpointFlags subgoal_policy;
  EndpointFlags action_policy;
  agent::EpisodeLimits limits;
};

void read_endpoint(const nlohmann::json& j, const char* key, EndpointFlags& into) {
  if (!j.contains(key)) return;
  const auto& e = j.at(key);
  if (e.contains("token")) throw ConfigError(std::string("config: ") + key + ": tokens are read from the environment only");
  into.url = e.value("url", into.url);
  into.model = e.value("model", into.model);
}

void apply_config_file(CliConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    if (j.contains("token")) throw ConfigError("config: tokens are read from the environment only");
    cfg.suite_path = j.value("suite_path", cfg.suite_path);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.seed = j.value("seed", cfg.seed);
    read_endpoint(j, "teacher", cfg.teacher);
    if (j.contains("policies")) {
      read_endpoint(j.at("policies"), "subgoal", cfg.subgoal_policy);
      read_endpoint(j.at("policies"), "action", cfg.action_policy);
    }
    if (j.contains("limits")) {
      cfg.limits.max_steps = j.at("limits").value("max_steps", cfg.limits.max_steps);
      cfg.limits.stall_window = j.at("limits").value("stall_window", cfg.limits.stall_window);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
}

// Scans args for --config before the real parse so file values act as
// defaults that flags can override.
std::string find_config_flag(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (starts_with(args[i], "--config=")) return args[i].substr(9);
  }
  return {};
}

std::shared_ptr<const world::TaskSuite> load_suite(const CliConfig& cfg) {
  if (!fs::exists(cfg.suite_path)) throw ConfigError("suite file '" + cfg.suite_path + "' does not exist");
  return std::make_shared<world::TaskSuite>(world::load_task_suite(cfg.suite_path));
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

// ---------------------------------------------------------------- validate

int cmd_validate(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!fs::exists(cfg.suite_path)) throw ConfigError("suite file '" + cfg.suite_path + "' does not exist");
  std::shared_ptr<const world::TaskSuite> suite;
  try {
    suite = std::make_shared<world::TaskSuite>(world::load_task_suite(cfg.suite_path));
  } catch (const ConfigError& e) {
    err << "invalid suite: " << e.what() << "\n";
    return kFailure;
  }
  world::Engine engine(suite);
  int failures = 0;
  int checked = 0;
  for (const auto& task : suite->tasks) {
    for (const auto& v : task.variations) {
      ++checked;
      try {
        auto expert = engine.expert_trajectory(task, v.id);
        auto [state, goal] = engine.instantiate(task, v.id, 0);
        for (const auto& step : expert) state = engine.step(state, step.action).first;
        if (state.cumulative_score != 100) {
          throw AuthoringError("replay ends with score " + std::to_string(state.cumulative_score));
        }
      } catch (const Error& e) {
        ++failures;
        err << "FAIL " << task.task_type_id << " variation " << v.id << ": " << e.what() << "\n";
      }
    }
  }
  out << "Validated " << checked << " variations across " << suite->tasks.size() << " task types: "
      << (checked - failures) << " ok, " << failures << " failed\n";
  return failures == 0 ? kOk : kFailure;
}

// ---------------------------------------------------------------- annotate

struct AnnotateFlags {
  std::string teacher = "scripted";
  double drop_rate = 0.0;
  double insert_rate = 0.0;
  double garbage_rate = 0.0;
  int budget = annotate::kDefaultBudget;
  int workers = 4;
};

std::unique_ptr<annotate::TeacherBackend> make_teacher(const AnnotateFlags& flags, const CliConfig& cfg,
                                                       const world::Engine& engine) {
  if (flags.teacher == "scripted") {
    annotate::CorruptionConfig c;
    c.drop_rate = flags.drop_rate;
    c.insert_rate = flags.insert_rate;
    c.garbage_rate = flags.garbage_rate;
    c.seed = cfg.seed;
    return std::make_unique<annotate::ScriptedOracleTeacher>(engine, c);
  }
  if (flags.teacher == "remote") {
    auto endpoint = cfg.teacher.endpoint();
    if (!endpoint) throw UsageError("--teacher remote needs --teacher-url and --teacher-model");
    if (flags.drop_rate > 0 || flags.insert_rate > 0 || flags.garbage_rate > 0) {
      throw UsageError("corruption flags only apply to the scripted teacher");
    }
    return std::make_unique<annotate::RemoteTeacher>(*endpoint);
  }
  throw UsageError("unknown teacher '" + flags.teacher + "' (expected scripted|remote)");
}

int cmd_annotate(const AnnotateFlags& flags, const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  for (double r : {flags.drop_rate, flags.insert_rate, flags.garbage_rate}) {
    if (r < 0.0 || r > 1.0) throw UsageError("corruption rates must lie in [0, 1]");
  }
  if (flags.budget < 0) throw UsageError("--budget must be >= 0");
  auto suite = load_suite(cfg);
  world::Engine engine(suite);
  auto teacher = make_teacher(flags, cfg, engine);

  annotate::SplitAnnotationOptions options;
  options.budget = flags.budget;
  options.workers = flags.workers;
  auto results = annotate::annotate_split(engine, *teacher, options);

  std::vector<annotate::StepRecord> records;
  struct Tally {
    int ok = 0;
    int failed = 0;
    int calls = 0;
    int retries = 0;
    std::size_t records = 0;
  };
  std::map<std::string, Tally> tally;
  for (const auto& task : suite->tasks) tally[task.task_type_id];
  for (const auto& r : results) {
    auto& t = tally[r.task_type_id];
    if (!r.outcome) {
      ++t.failed;
      err << "annotation failed for " << r.task_type_id << " variation " << r.variation_id << ": " << r.error << "\n";
      continue;
    }
    try {
      auto recs = annotate::build_step_records(r.outcome->trajectory, engine);
      t.records += recs.size();
      records.insert(records.end(), recs.begin(), recs.end());
      ++t.ok;
      t.calls += r.outcome->stats.teacher_calls;
      t.retries += r.outcome->stats.reprompts;
    } catch (const DataError& e) {
      ++t.failed;
      err << "record build failed for " << r.task_type_id << " variation " << r.variation_id << ": " << e.what()
          << "\n";
    }
  }

  const fs::path dir(cfg.output_dir);
  ensure_dir(dir);
  annotate::write_dataset(records, annotate::Role::action, dir / kActionFile);
  annotate::write_dataset(records, annotate::Role::subgoal, dir / kSubgoalFile);

  int fully_failed = 0;
  Tally total;
  for (const auto& [id, t] : tally) {
    const int initial = t.calls - t.retries;
    out << id << ": " << t.ok << " annotated, " << t.failed << " failed, " << t.records << " records, teacher calls "
        << t.calls << " (initial " << initial << ", retries " << t.retries << ")\n";
    if (t.ok == 0 && t.failed > 0) ++fully_failed;
    total.ok += t.ok;
    total.failed += t.failed;
    total.calls += t.calls;
    total.retries += t.retries;
    total.records += t.records;
  }
  out << "Total: " << total.ok << " annotated, " << total.failed << " failed, " << total.records
      << " records, teacher calls " << total.calls << " (initial " << (total.calls - total.retries) << ", retries "
      << total.retries << ")\n";
  out << "Wrote " << (dir / kActionFile).string() << " and " << (dir / kSubgoalFile).string() << "\n";
  return fully_failed == 0 ? kOk : kFailure;
}

// -------------------------------------------------------------------- eval

struct EvalFlags {
  std::string split = "test";
  int max_variations = 10;
  std::string agent = "oracle";
  std::string noise;
  std::string format = "json";
  std::string data_dir;
  std::string tasks;
  std::string seen;
  bool ablation = false;
  int workers = 4;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto& part : split(text, ",")) {
    auto t = trim(part);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

eval::AgentResources load_resources(const std::string& data_dir) {
  eval::AgentResources res;
  if (data_dir.empty()) return res;
  const fs::path dir(data_dir);
  res.action_rows = annotate::read_dataset(dir / kActionFile);
  res.subgoal_rows = annotate::read_dataset(dir / kSubgoalFile);
  return res;
}

void print_summary(const eval::EvalReport& report, std::ostream& out) {
  out << eval::to_markdown(report);
  out << "Overall Average: " << eval::format_percent(report.overall_avg) << "\n";
  out << "Solved Task Types: " << report.solved_count << "/" << report.per_task.size() << "\n";
}

int cmd_eval(const EvalFlags& flags, const CliConfig& cfg, std::ostream& out) {
  if (flags.ablation && !flags.noise.empty()) throw UsageError("--ablation runs its own noise grid; drop --noise");
  if (flags.ablation && !flags.seen.empty()) throw UsageError("--ablation and --seen cannot be combined");
  if (flags.max_variations < 1) throw UsageError("--max-variations must be >= 1");

  eval::EvalConfig config;
  config.split = world::split_from_string(flags.split);
  config.max_variations = flags.max_variations;
  config.agent.kind = eval::agent_kind_from_string(flags.agent);
  if (!flags.noise.empty()) config.agent.noise = agent::parse_noise_spec(flags.noise);
  config.agent.subgoal_endpoint = cfg.subgoal_policy.endpoint();
  config.agent.action_endpoint = cfg.action_policy.endpoint();
  if (config.agent.kind == eval::AgentKind::remote && (!config.agent.subgoal_endpoint || !config.agent.action_endpoint)) {
    throw UsageError("--agent remote needs --subgoal-url/--subgoal-model and --action-url/--action-model");
  }
  config.seed = cfg.seed;
  config.limits = cfg.limits;
  config.workers = flags.workers;
  config.task_types = split_list(flags.tasks);
  const auto format = eval::format_from_string(flags.format);

  auto suite = load_suite(cfg);
  world::Engine engine(suite);
  for (const auto& t : config.task_types) suite->task(t);
  auto resources = load_resources(flags.data_dir);
  const fs::path dir(cfg.output_dir);
  ensure_dir(dir);

  if (flags.ablation) {
    auto cells = eval::run_ablation_matrix(config, eval::default_noise_grid(cfg.seed), engine, resources);
    for (const auto& c : cells) {
      std::string name = replace_all(replace_all(agent::noise_label(c.noise), "/", "-"), " ", "-");
      eval::export_report(c.report, format, dir / ("report-" + name + std::string(eval::extension(format))));
    }
    auto table = eval::ablation_markdown(cells);
    std::ofstream md(dir / "ablation.md");
    if (!md) throw IoError("cannot open '" + (dir / "ablation.md").string() + "' for writing");
    md << table;
    out << table;
    return kOk;
  }

  if (!flags.seen.empty()) {
    auto g = eval::generalization_eval(split_list(flags.seen), config, engine, resources);
    eval::export_report(g.report, format, dir / ("report" + std::string(eval::extension(format))));
    print_summary(g.report, out);
    out << "Seen Average: " << eval::format_percent(g.seen_avg) << " (" << join(g.seen, ", ") << ")\n";
    out << "Unseen Average: " << eval::format_percent(g.unseen_avg) << " (" << join(g.unseen, ", ") << ")\n";
    return kOk;
  }

  auto run = eval::run_evaluation(config, engine, resources);
  eval::export_report(run.report, format, dir / ("report" + std::string(eval::extension(format))));
  std::ofstream transcripts(dir / "transcripts.jsonl", std::ios::binary);
  if (!transcripts) throw IoError("cannot open '" + (dir / "transcripts.jsonl").string() + "' for writing");
  for (const auto& ep : run.episodes) {
    nlohmann::ordered_json head;
    head["task"] = ep.goal.task_type_id;
    head["variation"] = ep.goal.variation_id;
    head["score"] = ep.final_score;
    head["reason"] = std::string(world::to_string(ep.termination_reason));
    transcripts << head.dump() << '\n';
    agent::write_transcript_jsonl(ep, transcripts);
  }
  if (config.agent.noise) out << "Noise: " << run.report.noise << "\n";
  print_summary(run.report, out);
  return kOk;
}

// -------------------------------------------------------------------- play

struct PlayFlags {
  std::string task;
  int variation = 0;
  std::string transcript;
};

int cmd_play(const PlayFlags& flags, const CliConfig& cfg, std::istream& in, std::ostream& out) {
  cfg.limits.validate();
  auto suite = load_suite(cfg);
  world::Engine engine(suite);
  const auto& task = suite->task(flags.task);
  auto [state, goal] = engine.instantiate(task, flags.variation, cfg.seed);

  agent::EpisodeResult result;
  result.goal = goal;
  result.final_score = state.cumulative_score;
  out << goal.text.str() << "\n" << world::render_room(state) << "\n";

  int last_change = 0;
  std::string line;
  bool ended = false;
  while (!ended && std::getline(in, line)) {
    const std::string raw = trim(line);
    if (raw.empty()) continue;
    if (raw == "quit") {
      out << "Quit.\n";
      break;
    }
    auto action = agent::repair_action(raw, engine.admissible_commands(state));
    if (action.surface != to_lower(raw)) out << "Repaired '" << raw << "' to '" << action.surface << "'\n";
    out << "> " << action.surface << "\n";
    auto [next, obs] = engine.step(state, action);
    state = std::move(next);
    if (obs.score_delta != 0) last_change = state.step_count;
    out << obs.text.str() << "\nScore: " << obs.score_after << "\n";
    result.transcript.push_back({state.step_count - 1, "none", raw, action.surface, obs.text.str(), obs.score_after});
    result.final_score = obs.score_after;

    if (obs.done) {
      result.termination_reason = obs.termination_reason;
      ended = true;
    } else if (state.step_count - last_change >= cfg.limits.stall_window) {
      result.termination_reason = world::TerminationReason::stall_limit;
      ended = true;
    } else if (state.step_count >= cfg.limits.max_steps) {
      result.termination_reason = world::TerminationReason::step_limit;
      ended = true;
    }
  }
  result.steps_taken = static_cast<int>(result.transcript.size());

  if (result.termination_reason == world::TerminationReason::stall_limit) {
    out << "Episode ended: stall_limit (score unchanged for " << cfg.limits.stall_window << " steps)\n";
  } else if (result.termination_reason != world::TerminationReason::none) {
    out << "Episode ended: " << world::to_string(result.termination_reason) << "\n";
  }
  out << "Final score: " << result.final_score << "\n";

  fs::path path = flags.transcript.empty()
                      ? fs::path(cfg.output_dir) / ("play-" + flags.task + "-" + std::to_string(flags.variation) + ".jsonl")
                      : fs::path(flags.transcript);
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  agent::write_transcript_jsonl(result, file);
  out << "Transcript saved to " << path.string() << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  try {
    if (auto path = find_config_flag(args); !path.empty()) apply_config_file(cfg, path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Sub-goal annotation, agent and evaluation toolkit for a small text world."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.add_option("--config", cfg.config_path, "JSON file with defaults for the options below");
  app.add_option("--suite", cfg.suite_path, "Task-suite JSON file")->capture_default_str();
  app.add_option("--out", cfg.output_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for teachers, noise and environments")->capture_default_str();
  app.add_option("--max-steps", cfg.limits.max_steps, "Episode step limit")->capture_default_str();
  app.add_option("--stall-window", cfg.limits.stall_window, "Steps without score change before stopping")
      ->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Replay every expert plan and check it reaches 100");

  AnnotateFlags af;
  auto* annotate_cmd = app.add_subcommand("annotate", "Annotate train variations and write both datasets");
  annotate_cmd->add_option("--teacher", af.teacher, "scripted|remote")->capture_default_str();
  annotate_cmd->add_option("--teacher-url", cfg.teacher.url, "Chat endpoint URL for the remote teacher");
  annotate_cmd->add_option("--teacher-model", cfg.teacher.model, "Model name for the remote teacher");
  annotate_cmd->add_option("--drop-rate", af.drop_rate, "Scripted teacher: share of actions dropped");
  annotate_cmd->add_option("--insert-rate", af.insert_rate, "Scripted teacher: share of spurious actions");
  annotate_cmd->add_option("--garbage-rate", af.garbage_rate, "Scripted teacher: chance of an unparseable reply");
  annotate_cmd->add_option("--budget", af.budget, "Re-prompt budget per trajectory")->capture_default_str();
  annotate_cmd->add_option("--workers", af.workers, "Parallel annotation workers")->capture_default_str();

  EvalFlags ef;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate an agent and write a report");
  eval_cmd->add_option("--split", ef.split, "train|dev|test")->capture_default_str();
  eval_cmd->add_option("--max-variations", ef.max_variations, "Variations per task type")->capture_default_str();
  eval_cmd->add_option("--agent", ef.agent, "oracle|scripted|flat|remote|wait")->capture_default_str();
  eval_cmd->add_option("--noise", ef.noise, "Sub-goal noise as kind:schedule:seed, e.g. random:each:7");
  eval_cmd->add_option("--format", ef.format, "json|csv|markdown")->capture_default_str();
  eval_cmd->add_option("--data", ef.data_dir, "Directory with action.jsonl and subgoal.jsonl");
  eval_cmd->add_option("--tasks", ef.tasks, "Comma-separated task types (default: all)");
  eval_cmd->add_option("--seen", ef.seen, "Comma-separated seen task types for a generalization run");
  eval_cmd->add_flag("--ablation", ef.ablation, "Run the random/semi-random noise grid");
  eval_cmd->add_option("--workers", ef.workers, "Parallel episodes")->capture_default_str();
  eval_cmd->add_option("--subgoal-url", cfg.subgoal_policy.url, "Chat endpoint for the sub-goal policy");
  eval_cmd->add_option("--subgoal-model", cfg.subgoal_policy.model, "Model for the sub-goal policy");
  eval_cmd->add_option("--action-url", cfg.action_policy.url, "Chat endpoint for the action policy");
  eval_cmd->add_option("--action-model", cfg.action_policy.model, "Model for the action policy");

  PlayFlags pf;
  auto* play = app.add_subcommand("play", "Step one variation with commands read from standard input");
  play->add_option("--task", pf.task, "Task type")->required();
  play->add_option("--variation", pf.variation, "Variation id")->capture_default_str();
  play->add_option("--transcript", pf.transcript, "Where to save the transcript (default: <out>/play-...)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*validate) return cmd_validate(cfg, out, err);
    if (*annotate_cmd) return cmd_annotate(af, cfg, out, err);
    if (*eval_cmd) return cmd_eval(ef, cfg, out);
    if (*play) return cmd_play(pf, cfg, in, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace subgoal::cli
