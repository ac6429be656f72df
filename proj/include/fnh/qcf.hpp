#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fnh/pipeline.hpp"
#include "fnh/types.hpp"

namespace fnh {

// Everything question-based context filtering produced for one sample.
struct QcfTrace {
  std::vector<std::string> sub_questions;                     // at most 5
  std::vector<std::pair<int, std::string>> extracted_facts;   // (sub-question index, facts)
  std::string filtered_context;                               // c', possibly empty
  int null_dropped = 0;
  std::vector<std::string> call_digests;
};

// Decomposes the question into at most five sub-questions (decoding
// temperature 1.0). Returns the parsed numbered list, truncated to 5.
std::vector<std::string> generate_subquestions(const std::string& question, ChatBackend& backend,
                                               const PipelineOptions& options,
                                               const std::string& sample_id = {});

// One fact-extraction call per sub-question, in order, at temperature 1.0.
// Null responses are dropped and counted into *null_dropped when given.
std::vector<std::pair<int, std::string>> extract_facts(const std::string& context,
                                                       const std::vector<std::string>& sub_questions,
                                                       ChatBackend& backend,
                                                       const PipelineOptions& options,
                                                       const std::string& sample_id = {},
                                                       int* null_dropped = nullptr);

// Reorders the kept facts into the filtered context c'. Empty input yields an
// empty c' without a backend call.
std::string reorganize_facts(const std::vector<std::pair<int, std::string>>& extracted,
                             const std::string& question, ChatBackend& backend,
                             const PipelineOptions& options, const std::string& sample_id = {});

// Full pipeline: decomposition, per-sub-question extraction with null
// filtering, reorganization. Errors carry the failing stage tag.
QcfTrace run_qcf(const Sample& sample, ChatBackend& backend, const PipelineOptions& options);

}  // namespace fnh
