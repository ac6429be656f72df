#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fnh/backend.hpp"
#include "fnh/corpus.hpp"
#include "fnh/metrics.hpp"
#include "fnh/types.hpp"

namespace fnh {

enum class Pipeline { Baseline, Qcf, QcfIar };
enum class BackendKind { Http, Mock };
enum class ConfidenceMode { TokenProb, Sampled, Off };

std::string to_string(Pipeline pipeline);
std::string to_string(BackendKind kind);
Pipeline pipeline_from_string(const std::string& text);
BackendKind backend_kind_from_string(const std::string& text);

struct RunConfig {
  std::filesystem::path dataset;
  CorpusFormat format = CorpusFormat::Normalized;
  std::string model = "default";
  BackendKind backend = BackendKind::Mock;
  std::filesystem::path transcript;             // mock backend script
  PromptMode mode = PromptMode::Original;
  Pipeline pipeline = Pipeline::Baseline;
  int n_rewrites = 5;
  std::optional<std::size_t> limit;             // nullopt = all samples
  std::filesystem::path cache_dir;              // empty = caching off
  ConfidenceMode confidence = ConfidenceMode::Off;
  int confidence_samples = 5;                   // k for sampled estimation
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
  std::filesystem::path null_patterns_file;     // empty = built-in list
  std::filesystem::path splits_file;            // empty = no per-split columns
  int workers = 4;
  double bin_width = 0.1;
};

struct ConditionResult {
  PromptMode mode = PromptMode::Original;
  Pipeline pipeline = Pipeline::Baseline;
  ConfusionCounts all;
  std::optional<SplitReport> splits;
  HistogramReport hist;
  std::size_t attempted = 0;
  std::size_t failed = 0;
  BackendStats stats;
  std::filesystem::path out_dir;
  std::vector<SampleOutcome> outcomes;   // successfully evaluated samples
  std::vector<Prediction> predictions;   // aligned with outcomes
};

// Closed-book answering at temperature 0.0: a sample is parametric when the
// parsed verdict matches the correct answer of the posed closed-book query
// (the ground truth in Original mode, True in All-True, False in All-False);
// everything else, Unknown included, is counterfactual. Splits are therefore
// keyed by (model, mode).
std::vector<SplitLabel> classify_knowledge(const std::vector<Sample>& samples,
                                           ChatBackend& backend, PromptMode mode,
                                           const std::string& model, int workers = 1);

// The correct verdict for a prompt of the given mode on a sample with this
// ground truth.
Label target_label(PromptMode mode, bool truth);

// Runs one (mode, pipeline) condition over the samples and writes
// manifest.json, samples.jsonl, confusion.csv, ratios.csv, hist_true.csv,
// hist_false.csv and summary.json under
// <out>/<model>/<mode>/<pipeline>/. Per-sample failures are recorded and
// excluded from tallies, never silently dropped.
ConditionResult run_condition(const RunConfig& config, const std::vector<Sample>& samples,
                              ChatBackend& raw_backend);

// Cartesian product of modes x pipelines, run sequentially. Emits one
// matrix.csv per mode (rows = pipeline, column groups = All / Parametric /
// Counterfactual). A condition failure aborts the matrix; completed
// conditions stay flushed.
std::vector<ConditionResult> run_matrix(const RunConfig& base, const std::vector<Sample>& samples,
                                        ChatBackend& raw_backend,
                                        const std::vector<PromptMode>& modes,
                                        const std::vector<Pipeline>& pipelines);

// Recomputes the report files of an existing run directory from its
// samples.jsonl (and optional splits file).
void regenerate_reports(const std::filesystem::path& run_dir,
                        const std::filesystem::path& splits_file = {});

std::unique_ptr<ChatBackend> make_backend(const RunConfig& config);

// load_corpus + optional prefix subset.
std::vector<Sample> load_run_corpus(const RunConfig& config);

}  // namespace fnh
