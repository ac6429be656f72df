#include "fnh/iar.hpp"

#include "fnh/errors.hpp"
#include "fnh/parsing.hpp"
#include "fnh/prompts.hpp"

namespace fnh {

std::vector<std::string> rewrite_chain(const std::string& question, const std::string& c_prime,
                                       int n, ChatBackend& backend,
                                       const PipelineOptions& options,
                                       const std::string& sample_id) {
  if (n < 0) throw ConfigError("rewrite count must be non-negative");

  std::vector<std::string> rewrites;
  rewrites.reserve(static_cast<std::size_t>(n) + 1);
  rewrites.push_back(question);
  for (int i = 1; i <= n; ++i) {
    ChatRequest request;
    request.model = options.model;
    request.messages = render_rewrite_prompt(c_prime, rewrites.back());
    request.temperature = 1.0;
    request.stage = "rewrite";
    request.sample_id = sample_id;
    try {
      rewrites.push_back(backend.complete(request).text);
    } catch (const FnhError& ex) {
      throw PipelineError("rewrite", i, ex.what());
    }
  }
  return rewrites;
}

IarTrace converse_and_predict(const Sample& sample, PromptMode mode, const std::string& c_prime,
                              const std::vector<std::string>& rewrites, ChatBackend& backend,
                              const PipelineOptions& options) {
  if (rewrites.empty() || rewrites.front() != sample.question) {
    throw ConfigError("rewrite chain must start with the original question");
  }

  IarTrace trace;
  DigestRecordingBackend recorder(backend, trace.call_digests);
  trace.rewrites = rewrites;
  trace.n = static_cast<int>(rewrites.size()) - 1;

  // Walk q_n .. q_1 in question form, feeding each raw answer back into the
  // dialog, newest rewrite first.
  for (int i = trace.n; i >= 1; --i) {
    ChatRequest request;
    request.model = options.model;
    request.messages = render_evaluation(PromptMode::Original, c_prime,
                                         rewrites[static_cast<std::size_t>(i)], sample.answer,
                                         trace.dialog);
    request.temperature = 0.0;
    request.stage = "answer";
    request.sample_id = sample.id;
    ChatResponse response;
    try {
      response = recorder.complete(request);
    } catch (const FnhError& ex) {
      throw PipelineError("answer", trace.n - i, ex.what());
    }
    trace.dialog.push_back({rewrites[static_cast<std::size_t>(i)], response.text});
  }

  // Concluding turn always derives from q_0: question form in Original mode,
  // statement form in All-True/All-False.
  ChatRequest final_request;
  final_request.model = options.model;
  final_request.messages =
      render_evaluation(mode, c_prime, sample.question, sample.answer, trace.dialog);
  final_request.temperature = 0.0;
  final_request.want_label_probs = options.want_label_probs;
  final_request.stage = "evaluate";
  final_request.sample_id = sample.id;

  ChatResponse response;
  try {
    response = recorder.complete(final_request);
  } catch (const FnhError& ex) {
    throw PipelineError("evaluate", -1, ex.what());
  }
  trace.final_request = final_request;
  trace.final_prediction = attach_confidence(parse_label(response.text), response);
  return trace;
}

IarTrace run_iar(const Sample& sample, PromptMode mode, const std::string& c_prime, int n,
                 ChatBackend& backend, const PipelineOptions& options) {
  std::vector<std::string> digests;
  DigestRecordingBackend recorder(backend, digests);
  std::vector<std::string> rewrites =
      rewrite_chain(sample.question, c_prime, n, recorder, options, sample.id);
  IarTrace trace = converse_and_predict(sample, mode, c_prime, rewrites, recorder, options);
  trace.call_digests = std::move(digests);  // rewrites plus answering turns, call order
  return trace;
}

}  // namespace fnh
