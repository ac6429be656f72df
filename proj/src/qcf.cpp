#include "fnh/qcf.hpp"

#include "fnh/errors.hpp"
#include "fnh/parsing.hpp"
#include "fnh/prompts.hpp"

namespace fnh {

namespace {

constexpr int kMaxSubquestions = 5;

ChatRequest stage_request(const PipelineOptions& options, std::vector<Message> messages,
                          const char* stage, const std::string& sample_id) {
  ChatRequest request;
  request.model = options.model;
  request.messages = std::move(messages);
  request.temperature = 1.0;
  request.stage = stage;
  request.sample_id = sample_id;
  return request;
}

}  // namespace

std::vector<std::string> generate_subquestions(const std::string& question, ChatBackend& backend,
                                               const PipelineOptions& options,
                                               const std::string& sample_id) {
  ChatRequest request =
      stage_request(options, render_subquestion_prompt(question), "subquestion", sample_id);
  ChatResponse response;
  try {
    response = backend.complete(request);
  } catch (const FnhError& ex) {
    throw PipelineError("subquestion", -1, ex.what());
  }
  std::vector<std::string> sub_questions = parse_numbered_list(response.text);
  if (sub_questions.size() > kMaxSubquestions) sub_questions.resize(kMaxSubquestions);
  return sub_questions;
}

std::vector<std::pair<int, std::string>> extract_facts(const std::string& context,
                                                       const std::vector<std::string>& sub_questions,
                                                       ChatBackend& backend,
                                                       const PipelineOptions& options,
                                                       const std::string& sample_id,
                                                       int* null_dropped) {
  std::vector<std::pair<int, std::string>> extracted;
  for (std::size_t i = 0; i < sub_questions.size(); ++i) {
    ChatRequest request = stage_request(
        options, render_fact_extraction_prompt(context, sub_questions[i]), "extract", sample_id);
    ChatResponse response;
    try {
      response = backend.complete(request);
    } catch (const FnhError& ex) {
      throw PipelineError("extract", static_cast<int>(i), ex.what());
    }
    if (is_null_response(response.text, options.null_patterns)) {
      if (null_dropped) ++*null_dropped;
      continue;
    }
    extracted.emplace_back(static_cast<int>(i), response.text);
  }
  return extracted;
}

std::string reorganize_facts(const std::vector<std::pair<int, std::string>>& extracted,
                             const std::string& question, ChatBackend& backend,
                             const PipelineOptions& options, const std::string& sample_id) {
  if (extracted.empty()) return "";

  std::string facts;
  for (const auto& [index, text] : extracted) {
    if (!facts.empty()) facts += '\n';
    facts += text;
  }
  ChatRequest request =
      stage_request(options, render_reorganization_prompt(facts, question), "reorganize", sample_id);
  try {
    return backend.complete(request).text;
  } catch (const FnhError& ex) {
    throw PipelineError("reorganize", -1, ex.what());
  }
}

QcfTrace run_qcf(const Sample& sample, ChatBackend& backend, const PipelineOptions& options) {
  QcfTrace trace;
  DigestRecordingBackend recorder(backend, trace.call_digests);

  trace.sub_questions = generate_subquestions(sample.question, recorder, options, sample.id);
  trace.extracted_facts = extract_facts(sample.context, trace.sub_questions, recorder, options,
                                        sample.id, &trace.null_dropped);
  trace.filtered_context =
      reorganize_facts(trace.extracted_facts, sample.question, recorder, options, sample.id);
  return trace;
}

}  // namespace fnh
