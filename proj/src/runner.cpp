#include "fnh/runner.hpp"

#include <atomic>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "fnh/errors.hpp"
#include "fnh/http_backend.hpp"
#include "fnh/iar.hpp"
#include "fnh/json_io.hpp"
#include "fnh/mock_backend.hpp"
#include "fnh/parsing.hpp"
#include "fnh/pipeline.hpp"
#include "fnh/prompts.hpp"
#include "fnh/qcf.hpp"
#include "fnh/util.hpp"

namespace fnh {

namespace {

using nlohmann::json;

std::string sanitize_component(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    if (c == '/' || c == '\\' || c == ':') c = '_';
  }
  return out.empty() ? "_" : out;
}

// Runs fn(0..n-1) on up to `workers` threads; the first captured exception
// is rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  int threads = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (std::thread& thread : pool) thread.join();
  for (const std::exception_ptr& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

json qcf_trace_json(const QcfTrace& trace) {
  json facts = json::array();
  for (const auto& [index, text] : trace.extracted_facts) {
    facts.push_back({{"sub_question", index}, {"facts", text}});
  }
  return json{{"sub_questions", trace.sub_questions},
              {"extracted_facts", std::move(facts)},
              {"filtered_context", trace.filtered_context},
              {"c_prime_empty", trace.filtered_context.empty()},
              {"null_dropped", trace.null_dropped},
              {"call_digests", trace.call_digests}};
}

json iar_trace_json(const IarTrace& trace) {
  return json{{"rewrites", trace.rewrites},
              {"dialog", trace.dialog},
              {"n", trace.n},
              {"call_digests", trace.call_digests}};
}

struct SampleRecord {
  std::string sample_id;
  bool truth = false;
  Prediction prediction;
  json trace;
  bool failed = false;
  std::string error;
};

json config_json(const RunConfig& config) {
  json confidence = {{"mode", config.confidence == ConfidenceMode::TokenProb ? "token_prob"
                              : config.confidence == ConfidenceMode::Sampled ? "sampled"
                                                                             : "off"}};
  if (config.confidence == ConfidenceMode::Sampled) confidence["k"] = config.confidence_samples;
  return json{{"dataset", config.dataset.string()},
              {"format", to_string(config.format)},
              {"model", config.model},
              {"backend", to_string(config.backend)},
              {"transcript", config.transcript.string()},
              {"mode", to_string(config.mode)},
              {"pipeline", to_string(config.pipeline)},
              {"n_rewrites", config.n_rewrites},
              {"limit", config.limit.has_value() ? json(*config.limit) : json(nullptr)},
              {"cache_dir", config.cache_dir.string()},
              {"confidence", std::move(confidence)},
              {"out_dir", config.out_dir.string()},
              {"seed", config.seed},
              {"null_patterns_file", config.null_patterns_file.string()},
              {"splits_file", config.splits_file.string()},
              {"workers", config.workers},
              {"bin_width", config.bin_width}};
}

std::vector<std::string> resolve_null_patterns(const RunConfig& config) {
  if (config.null_patterns_file.empty()) return default_null_patterns();
  return load_null_patterns(config.null_patterns_file);
}

void write_condition_reports(const std::filesystem::path& dir, const ConditionResult& result) {
  std::vector<std::pair<std::string, ConfusionCounts>> rows = {{"all", result.all}};
  if (result.splits.has_value()) {
    rows.emplace_back("parametric", result.splits->parametric);
    rows.emplace_back("counterfactual", result.splits->counterfactual);
  }
  write_text_file_atomic(dir / "confusion.csv", confusion_csv(rows));
  write_text_file_atomic(dir / "ratios.csv", ratios_csv(rows));
  write_text_file_atomic(dir / "hist_true.csv", histogram_csv(result.hist.true_series));
  write_text_file_atomic(dir / "hist_false.csv", histogram_csv(result.hist.false_series));

  json summary = {
      {"mode", to_string(result.mode)},
      {"pipeline", to_string(result.pipeline)},
      {"attempted", result.attempted},
      {"failed", result.failed},
      {"confusion",
       {{"tp", result.all.tp},
        {"tn", result.all.tn},
        {"fp", result.all.fp},
        {"fn", result.all.fn},
        {"unknown", result.all.unknown},
        {"total", result.all.total}}},
      {"histogram_excluded", result.hist.excluded},
  };
  if (result.all.total > result.all.unknown) {
    summary["fn_ratio_valid"] = ratio_valid(result.all.fn, result.all);
    summary["fp_ratio_valid"] = ratio_valid(result.all.fp, result.all);
  }
  if (result.all.tp + result.all.fn > 0) summary["fn_rate"] = fn_rate(result.all);
  if (result.all.tn + result.all.fp > 0) summary["fp_rate"] = fp_rate(result.all);
  write_text_file_atomic(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace

std::string to_string(Pipeline pipeline) {
  switch (pipeline) {
    case Pipeline::Baseline: return "baseline";
    case Pipeline::Qcf: return "qcf";
    case Pipeline::QcfIar: return "qcf_iar";
  }
  return "baseline";
}

std::string to_string(BackendKind kind) {
  return kind == BackendKind::Http ? "http" : "mock";
}

Pipeline pipeline_from_string(const std::string& text) {
  if (text == "baseline") return Pipeline::Baseline;
  if (text == "qcf") return Pipeline::Qcf;
  if (text == "qcf_iar") return Pipeline::QcfIar;
  throw ConfigError("unknown pipeline: " + text);
}

BackendKind backend_kind_from_string(const std::string& text) {
  if (text == "http") return BackendKind::Http;
  if (text == "mock") return BackendKind::Mock;
  throw ConfigError("unknown backend kind: " + text);
}

Label target_label(PromptMode mode, bool truth) {
  switch (mode) {
    case PromptMode::Original: return truth ? Label::True : Label::False;
    case PromptMode::AllTrue: return Label::True;
    case PromptMode::AllFalse: return Label::False;
  }
  return Label::Unknown;
}

std::vector<SplitLabel> classify_knowledge(const std::vector<Sample>& samples,
                                           ChatBackend& backend, PromptMode mode,
                                           const std::string& model, int workers) {
  std::vector<SplitLabel> labels(samples.size());
  parallel_for(samples.size(), workers, [&](std::size_t i) {
    const Sample& sample = samples[i];
    ChatRequest request;
    request.model = model;
    request.messages = render_closed_book(mode, sample.question, sample.answer);
    request.temperature = 0.0;
    request.stage = "closed_book";
    request.sample_id = sample.id;

    ChatResponse response = backend.complete(request);
    Label verdict = parse_label(response.text);

    SplitLabel& label = labels[i];
    label.sample_id = sample.id;
    label.closed_book_label = verdict;
    label.closed_book_raw = response.text;
    label.label = verdict == target_label(mode, sample.answer) ? SplitKind::Parametric
                                                               : SplitKind::Counterfactual;
  });
  return labels;
}

ConditionResult run_condition(const RunConfig& config, const std::vector<Sample>& samples,
                              ChatBackend& raw_backend) {
  if (config.n_rewrites < 0) throw ConfigError("n_rewrites must be non-negative");
  if (config.confidence == ConfidenceMode::Sampled && config.confidence_samples < 1) {
    throw ConfigError("sampled confidence needs k >= 1");
  }

  CachingBackend backend(raw_backend,
                         config.cache_dir.empty()
                             ? std::optional<std::filesystem::path>{}
                             : std::optional<std::filesystem::path>{config.cache_dir});

  PipelineOptions options;
  options.model = config.model;
  options.null_patterns = resolve_null_patterns(config);
  options.want_label_probs = config.confidence == ConfidenceMode::TokenProb;

  std::filesystem::path dir = config.out_dir / sanitize_component(config.model) /
                              to_string(config.mode) / to_string(config.pipeline);
  std::filesystem::create_directories(dir);

  std::string started = iso8601_utc_now();

  std::vector<SampleRecord> records(samples.size());
  parallel_for(samples.size(), config.workers, [&](std::size_t i) {
    const Sample& sample = samples[i];
    SampleRecord& record = records[i];
    record.sample_id = sample.id;
    record.truth = sample.answer;
    try {
      std::string context = sample.context;
      json trace = json::object();
      trace["pipeline"] = to_string(config.pipeline);

      if (config.pipeline != Pipeline::Baseline) {
        QcfTrace qcf = run_qcf(sample, backend, options);
        context = qcf.filtered_context;
        trace["qcf"] = qcf_trace_json(qcf);
      }

      Prediction prediction;
      ChatRequest final_request;
      if (config.pipeline == Pipeline::QcfIar) {
        IarTrace it =
            run_iar(sample, config.mode, context, config.n_rewrites, backend, options);
        trace["iar"] = iar_trace_json(it);
        prediction = it.final_prediction;
        final_request = it.final_request;
      } else {
        final_request.model = config.model;
        final_request.messages =
            render_evaluation(config.mode, context, sample.question, sample.answer);
        final_request.temperature = 0.0;
        final_request.want_label_probs = options.want_label_probs;
        final_request.stage = "evaluate";
        final_request.sample_id = sample.id;
        ChatResponse response = backend.complete(final_request);
        prediction = attach_confidence(parse_label(response.text), response);
        trace["eval_digest"] = cache_key(backend.id(), final_request);
      }

      if (config.confidence == ConfidenceMode::Sampled &&
          prediction.confidence_source == ConfidenceSource::None) {
        LabelDistribution sampled =
            estimate_label_probs(backend, final_request, config.confidence_samples);
        ChatResponse carrier;
        carrier.text = prediction.raw;
        prediction = attach_confidence(prediction.label, carrier, sampled);
      }

      record.prediction = std::move(prediction);
      record.trace = std::move(trace);
    } catch (const std::exception& ex) {
      record.failed = true;
      record.error = ex.what();
    }
  });

  ConditionResult result;
  result.mode = config.mode;
  result.pipeline = config.pipeline;
  result.attempted = samples.size();
  result.out_dir = dir;
  for (const SampleRecord& record : records) {
    if (record.failed) {
      ++result.failed;
      continue;
    }
    result.outcomes.push_back({record.sample_id, record.truth, record.prediction.label});
    result.predictions.push_back(record.prediction);
  }
  result.all = tally(config.mode, result.outcomes);
  result.hist = histogram(result.predictions, config.bin_width);
  if (!config.splits_file.empty()) {
    std::map<std::string, SplitKind> split_map;
    for (const SplitLabel& label : load_splits(config.splits_file, samples)) {
      split_map[label.sample_id] = label.label;
    }
    result.splits = split_report(config.mode, result.outcomes, split_map);
  }
  result.stats = backend.stats();

  // Manifest goes out first, then the report files.
  json manifest = {
      {"config", config_json(config)},
      {"template_version", template_version_hash()},
      {"null_patterns", null_patterns_digest(options.null_patterns)},
      {"started_at", started},
      {"finished_at", iso8601_utc_now()},
      {"backend_calls", result.stats.calls},
      {"cache_hits", result.stats.cache_hits},
      {"upstream_calls", result.stats.upstream_calls},
      {"attempted", result.attempted},
      {"failed", result.failed},
  };
  write_text_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

  std::string lines;
  for (const SampleRecord& record : records) {
    json row = {
        {"sample_id", record.sample_id},
        {"truth", record.truth},
        {"failed", record.failed},
    };
    if (record.failed) {
      row["error"] = record.error;
    } else {
      row["label"] = to_string(record.prediction.label);
      row["confidence"] = record.prediction.confidence.has_value()
                              ? json(*record.prediction.confidence)
                              : json(nullptr);
      row["confidence_source"] = to_string(record.prediction.confidence_source);
      row["raw"] = record.prediction.raw;
      row["trace"] = record.trace;
      auto calls = result.stats.per_sample_calls.find(record.sample_id);
      row["calls"] = calls == result.stats.per_sample_calls.end() ? 0 : calls->second;
    }
    lines += row.dump();
    lines += '\n';
  }
  write_text_file_atomic(dir / "samples.jsonl", lines);

  write_condition_reports(dir, result);
  return result;
}

std::vector<ConditionResult> run_matrix(const RunConfig& base, const std::vector<Sample>& samples,
                                        ChatBackend& raw_backend,
                                        const std::vector<PromptMode>& modes,
                                        const std::vector<Pipeline>& pipelines) {
  std::vector<ConditionResult> results;
  results.reserve(modes.size() * pipelines.size());
  for (PromptMode mode : modes) {
    std::vector<std::size_t> mode_results;
    for (Pipeline pipeline : pipelines) {
      RunConfig config = base;
      config.mode = mode;
      config.pipeline = pipeline;
      results.push_back(run_condition(config, samples, raw_backend));
      mode_results.push_back(results.size() - 1);
    }

    // One table per mode: rows = pipeline, column groups = splits.
    std::ostringstream table;
    table << "pipeline,all_fn,all_fp,all_unknown,parametric_fn,parametric_fp,"
             "parametric_unknown,counterfactual_fn,counterfactual_fp,counterfactual_unknown\n";
    for (std::size_t index : mode_results) {
      const ConditionResult* result = &results[index];
      table << to_string(result->pipeline) << ',' << result->all.fn << ',' << result->all.fp
            << ',' << result->all.unknown;
      if (result->splits.has_value()) {
        const SplitReport& s = *result->splits;
        table << ',' << s.parametric.fn << ',' << s.parametric.fp << ',' << s.parametric.unknown
              << ',' << s.counterfactual.fn << ',' << s.counterfactual.fp << ','
              << s.counterfactual.unknown;
      } else {
        table << ",,,,,,";
      }
      table << '\n';
    }
    std::filesystem::path mode_dir =
        base.out_dir / sanitize_component(base.model) / to_string(mode);
    std::filesystem::create_directories(mode_dir);
    write_text_file_atomic(mode_dir / "matrix.csv", table.str());
  }
  return results;
}

void regenerate_reports(const std::filesystem::path& run_dir,
                        const std::filesystem::path& splits_file) {
  std::ifstream manifest_in(run_dir / "manifest.json");
  if (!manifest_in) throw ConfigError("no manifest.json under " + run_dir.string());
  json manifest;
  try {
    manifest_in >> manifest;
  } catch (const json::exception& ex) {
    throw ConfigError("corrupt manifest.json: " + std::string(ex.what()));
  }

  ConditionResult result;
  result.mode = prompt_mode_from_string(manifest.at("config").at("mode").get<std::string>());
  result.pipeline = pipeline_from_string(manifest.at("config").at("pipeline").get<std::string>());
  double bin_width = manifest.at("config").at("bin_width").get<double>();

  std::ifstream in(run_dir / "samples.jsonl");
  if (!in) throw ConfigError("no samples.jsonl under " + run_dir.string());
  std::vector<Sample> ids_only;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json row = json::parse(line);
    ++result.attempted;
    if (row.at("failed").get<bool>()) {
      ++result.failed;
      continue;
    }
    SampleOutcome outcome;
    outcome.sample_id = row.at("sample_id").get<std::string>();
    outcome.truth = row.at("truth").get<bool>();
    outcome.label = label_from_string(row.at("label").get<std::string>());
    result.outcomes.push_back(outcome);

    Prediction prediction;
    prediction.label = outcome.label;
    if (!row.at("confidence").is_null()) prediction.confidence = row.at("confidence").get<double>();
    prediction.confidence_source =
        confidence_source_from_string(row.at("confidence_source").get<std::string>());
    prediction.raw = row.at("raw").get<std::string>();
    result.predictions.push_back(std::move(prediction));

    Sample id_holder;
    id_holder.id = outcome.sample_id;
    id_holder.question = "?";
    ids_only.push_back(std::move(id_holder));
  }

  result.all = tally(result.mode, result.outcomes);
  result.hist = histogram(result.predictions, bin_width);
  if (!splits_file.empty()) {
    std::map<std::string, SplitKind> split_map;
    for (const SplitLabel& label : load_splits(splits_file, ids_only)) {
      split_map[label.sample_id] = label.label;
    }
    result.splits = split_report(result.mode, result.outcomes, split_map);
  }
  result.out_dir = run_dir;
  write_condition_reports(run_dir, result);
}

std::unique_ptr<ChatBackend> make_backend(const RunConfig& config) {
  switch (config.backend) {
    case BackendKind::Mock: {
      if (config.transcript.empty()) {
        throw ConfigError("mock backend needs --transcript");
      }
      return MockBackend::from_transcript(config.transcript, config.seed);
    }
    case BackendKind::Http:
      return std::make_unique<HttpBackend>(http_config_from_env());
  }
  throw ConfigError("unknown backend kind");
}

std::vector<Sample> load_run_corpus(const RunConfig& config) {
  std::vector<Sample> samples = load_corpus(config.dataset, config.format);
  if (config.limit.has_value()) return subset(samples, *config.limit);
  return samples;
}

}  // namespace fnh
