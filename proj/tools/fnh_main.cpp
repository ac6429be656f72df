#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fnh/backend.hpp"
#include "fnh/corpus.hpp"
#include "fnh/errors.hpp"
#include "fnh/metrics.hpp"
#include "fnh/prompts.hpp"
#include "fnh/runner.hpp"

namespace {

using namespace fnh;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBackend = 3;
constexpr int kExitPartial = 4;

struct CommonFlags {
  std::string dataset;
  std::string format = "normalized";
  std::string model = "default";
  std::string backend = "mock";
  std::string transcript;
  std::string cache_dir;
  std::string out_dir = "out";
  std::string null_patterns;
  std::string splits;
  std::string confidence = "off";
  int confidence_samples = 5;
  int n_rewrites = 5;
  int workers = 4;
  double bin_width = 0.1;
  std::uint64_t seed = 0;
  std::int64_t limit = -1;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--dataset", flags.dataset, "corpus file")->required();
  cmd->add_option("--format", flags.format, "strategyqa|boolq|normalized");
  cmd->add_option("--model", flags.model, "model identifier sent to the backend");
  cmd->add_option("--backend", flags.backend, "http|mock");
  cmd->add_option("--transcript", flags.transcript, "mock transcript (JSONL)");
  cmd->add_option("--cache-dir", flags.cache_dir, "response cache directory");
  cmd->add_option("--limit", flags.limit, "evaluate only the first N samples");
  cmd->add_option("--seed", flags.seed, "master seed for scripted randomness");
  cmd->add_option("--workers", flags.workers, "parallel sample workers");
  cmd->add_option("--null-patterns", flags.null_patterns,
                  "null-response pattern file, one literal prefix per line");
}

RunConfig to_config(const CommonFlags& flags) {
  RunConfig config;
  config.dataset = flags.dataset;
  config.format = corpus_format_from_string(flags.format);
  config.model = flags.model;
  config.backend = backend_kind_from_string(flags.backend);
  config.transcript = flags.transcript;
  config.cache_dir = flags.cache_dir;
  config.out_dir = flags.out_dir;
  config.null_patterns_file = flags.null_patterns;
  config.splits_file = flags.splits;
  config.n_rewrites = flags.n_rewrites;
  config.workers = flags.workers;
  config.bin_width = flags.bin_width;
  config.seed = flags.seed;
  if (flags.limit >= 0) config.limit = static_cast<std::size_t>(flags.limit);
  if (flags.confidence == "token_prob") {
    config.confidence = ConfidenceMode::TokenProb;
  } else if (flags.confidence == "sampled") {
    config.confidence = ConfidenceMode::Sampled;
  } else if (flags.confidence == "off") {
    config.confidence = ConfidenceMode::Off;
  } else {
    throw ConfigError("unknown confidence estimator: " + flags.confidence);
  }
  config.confidence_samples = flags.confidence_samples;
  return config;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string item = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

void print_condition(const ConditionResult& result) {
  std::printf("%s/%s: tp=%zu tn=%zu fp=%zu fn=%zu unknown=%zu total=%zu failed=%zu -> %s\n",
              to_string(result.mode).c_str(), to_string(result.pipeline).c_str(), result.all.tp,
              result.all.tn, result.all.fp, result.all.fn, result.all.unknown, result.all.total,
              result.failed, result.out_dir.string().c_str());
}

int cmd_split(const CommonFlags& flags, const std::string& mode_text, const std::string& out) {
  RunConfig config = to_config(flags);
  config.mode = prompt_mode_from_string(mode_text);

  std::vector<Sample> samples = load_run_corpus(config);
  auto raw = make_backend(config);
  CachingBackend backend(*raw, config.cache_dir.empty()
                                   ? std::optional<std::filesystem::path>{}
                                   : std::optional<std::filesystem::path>{config.cache_dir});

  std::vector<SplitLabel> labels =
      classify_knowledge(samples, backend, config.mode, config.model, config.workers);
  save_splits(out, labels);

  std::size_t parametric = 0;
  for (const SplitLabel& label : labels) {
    if (label.label == SplitKind::Parametric) ++parametric;
  }
  std::printf("split %zu samples: parametric=%zu counterfactual=%zu -> %s\n", labels.size(),
              parametric, labels.size() - parametric, out.c_str());
  return kExitOk;
}

int cmd_run(const CommonFlags& flags, const std::string& mode_text,
            const std::string& pipeline_text) {
  RunConfig config = to_config(flags);
  config.mode = prompt_mode_from_string(mode_text);
  config.pipeline = pipeline_from_string(pipeline_text);

  std::vector<Sample> samples = load_run_corpus(config);
  auto backend = make_backend(config);
  ConditionResult result = run_condition(config, samples, *backend);
  print_condition(result);
  return result.failed > 0 ? kExitPartial : kExitOk;
}

int cmd_matrix(const CommonFlags& flags, const std::string& modes_text,
               const std::string& pipelines_text) {
  RunConfig config = to_config(flags);

  std::vector<PromptMode> modes;
  for (const std::string& mode : split_list(modes_text)) {
    modes.push_back(prompt_mode_from_string(mode));
  }
  std::vector<Pipeline> pipelines;
  for (const std::string& pipeline : split_list(pipelines_text)) {
    pipelines.push_back(pipeline_from_string(pipeline));
  }
  if (modes.empty() || pipelines.empty()) {
    throw ConfigError("matrix needs at least one mode and one pipeline");
  }

  std::vector<Sample> samples = load_run_corpus(config);
  auto backend = make_backend(config);
  std::vector<ConditionResult> results = run_matrix(config, samples, *backend, modes, pipelines);

  std::size_t failed = 0;
  for (const ConditionResult& result : results) {
    print_condition(result);
    failed += result.failed;
  }
  return failed > 0 ? kExitPartial : kExitOk;
}

int cmd_report(const std::string& run_dir, const std::string& splits) {
  regenerate_reports(run_dir, splits);
  std::printf("reports regenerated under %s\n", run_dir.c_str());
  return kExitOk;
}

int cmd_render(const std::string& kind, const std::string& mode_text, const std::string& question,
               const std::string& context, const std::string& document,
               const std::string& facts, bool answer, bool with_dialog,
               const std::vector<std::string>& turns) {
  std::vector<Message> messages;
  if (kind == "subquestion") {
    messages = render_subquestion_prompt(question);
  } else if (kind == "extract") {
    messages = render_fact_extraction_prompt(document, question);
  } else if (kind == "reorganize") {
    messages = render_reorganization_prompt(facts, question);
  } else if (kind == "rewrite") {
    messages = render_rewrite_prompt(context, question);
  } else if (kind == "evaluation") {
    std::optional<DialogHistory> dialog;
    if (with_dialog || !turns.empty()) {
      DialogHistory history;
      for (const std::string& turn : turns) {
        std::size_t sep = turn.find("||");
        if (sep == std::string::npos) {
          throw ConfigError("--turn expects \"question||answer\"");
        }
        history.push_back({turn.substr(0, sep), turn.substr(sep + 2)});
      }
      dialog = std::move(history);
    }
    messages = render_evaluation(prompt_mode_from_string(mode_text), context, question, answer,
                                 dialog);
  } else if (kind == "closed_book") {
    messages = render_closed_book(prompt_mode_from_string(mode_text), question, answer);
  } else {
    throw ConfigError("unknown prompt kind: " + kind);
  }
  for (const Message& message : messages) {
    std::printf("[%s]\n%s\n", to_string(message.role).c_str(), message.content.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"false-negative evaluation harness for context-grounded yes/no QA"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string mode = "original";
  std::string pipeline = "baseline";
  std::string modes = "original";
  std::string pipelines = "baseline";
  std::string splits_out = "splits.jsonl";
  std::string run_dir;
  std::string render_kind;
  std::string question;
  std::string context;
  std::string document;
  std::string facts;
  bool answer = true;
  bool with_dialog = false;
  std::vector<std::string> turns;

  CLI::App* split_cmd = app.add_subcommand("split", "closed-book knowledge-conflict splitting");
  add_common_flags(split_cmd, flags);
  split_cmd->add_option("--mode", mode, "original|all_true|all_false");
  split_cmd->add_option("--out", splits_out, "splits file to write");

  CLI::App* run_cmd = app.add_subcommand("run", "run one (mode, pipeline) condition");
  add_common_flags(run_cmd, flags);
  run_cmd->add_option("--mode", mode, "original|all_true|all_false");
  run_cmd->add_option("--pipeline", pipeline, "baseline|qcf|qcf_iar");
  run_cmd->add_option("--n-rewrites", flags.n_rewrites, "question rewrites for qcf_iar");
  run_cmd->add_option("--confidence", flags.confidence, "token_prob|sampled|off");
  run_cmd->add_option("--confidence-samples", flags.confidence_samples,
                      "completions per sampled-confidence estimate");
  run_cmd->add_option("--bin-width", flags.bin_width, "confidence histogram bin width");
  run_cmd->add_option("--splits", flags.splits, "splits file for per-split reporting");
  run_cmd->add_option("--out", flags.out_dir, "output directory");

  CLI::App* matrix_cmd = app.add_subcommand("matrix", "run a modes x pipelines grid");
  add_common_flags(matrix_cmd, flags);
  matrix_cmd->add_option("--modes", modes, "comma-separated prompt modes");
  matrix_cmd->add_option("--pipelines", pipelines, "comma-separated pipelines");
  matrix_cmd->add_option("--n-rewrites", flags.n_rewrites, "question rewrites for qcf_iar");
  matrix_cmd->add_option("--confidence", flags.confidence, "token_prob|sampled|off");
  matrix_cmd->add_option("--confidence-samples", flags.confidence_samples,
                         "completions per sampled-confidence estimate");
  matrix_cmd->add_option("--bin-width", flags.bin_width, "confidence histogram bin width");
  matrix_cmd->add_option("--splits", flags.splits, "splits file for per-split reporting");
  matrix_cmd->add_option("--out", flags.out_dir, "output directory");

  CLI::App* report_cmd = app.add_subcommand("report", "recompute reports from samples.jsonl");
  report_cmd->add_option("--run-dir", run_dir, "condition output directory")->required();
  report_cmd->add_option("--splits", flags.splits, "splits file for per-split reporting");

  CLI::App* render_cmd = app.add_subcommand("render", "dump a rendered prompt for inspection");
  render_cmd->add_option("--kind", render_kind,
                         "subquestion|extract|reorganize|rewrite|evaluation|closed_book")
      ->required();
  render_cmd->add_option("--mode", mode, "original|all_true|all_false");
  render_cmd->add_option("--question", question, "question text");
  render_cmd->add_option("--context", context, "context text");
  render_cmd->add_option("--document", document, "document for fact extraction");
  render_cmd->add_option("--facts", facts, "facts list for reorganization");
  render_cmd->add_flag("--answer,!--no-answer", answer, "ground truth (default true)");
  render_cmd->add_flag("--with-dialog", with_dialog, "use the conversation template");
  render_cmd->add_option("--turn", turns, "dialog turn as \"question||answer\" (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (split_cmd->parsed()) return cmd_split(flags, mode, splits_out);
    if (run_cmd->parsed()) return cmd_run(flags, mode, pipeline);
    if (matrix_cmd->parsed()) return cmd_matrix(flags, modes, pipelines);
    if (report_cmd->parsed()) return cmd_report(run_dir, flags.splits);
    if (render_cmd->parsed()) {
      return cmd_render(render_kind, mode, question, context, document, facts, answer,
                        with_dialog, turns);
    }
  } catch (const ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const BackendError& ex) {
    std::cerr << "backend error: " << ex.what() << "\n";
    return ex.transport() ? kExitBackend : 1;
  } catch (const FnhError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return kExitOk;
}
