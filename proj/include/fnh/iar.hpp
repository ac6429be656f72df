#pragma once

#include <string>
#include <vector>

#include "fnh/pipeline.hpp"
#include "fnh/types.hpp"

namespace fnh {

// Everything iterative answer refinement produced for one sample.
struct IarTrace {
  std::vector<std::string> rewrites;  // [q_0 .. q_n], q_0 = original question
  DialogHistory dialog;               // (q_n, a_n) .. (q_1, a_1), raw answers
  Prediction final_prediction;
  int n = 0;
  std::vector<std::string> call_digests;
  ChatRequest final_request;          // the concluding evaluation call
};

// Rewrites the question n times against c' at temperature 1.0. Returns all
// n+1 questions in order, starting with the original.
std::vector<std::string> rewrite_chain(const std::string& question, const std::string& c_prime,
                                       int n, ChatBackend& backend,
                                       const PipelineOptions& options,
                                       const std::string& sample_id = {});

// Conversation-style factuality discrimination over the rewrite chain:
// answer q_n with empty dialog, then each earlier rewrite with the
// accumulated history, and conclude with the original question — question
// form in Original mode, statement form otherwise. Answering runs at
// temperature 0.0; intermediate replies enter the dialog verbatim.
IarTrace converse_and_predict(const Sample& sample, PromptMode mode, const std::string& c_prime,
                              const std::vector<std::string>& rewrites, ChatBackend& backend,
                              const PipelineOptions& options);

// rewrite_chain followed by converse_and_predict: 2n+1 backend calls total.
IarTrace run_iar(const Sample& sample, PromptMode mode, const std::string& c_prime, int n,
                 ChatBackend& backend, const PipelineOptions& options);

}  // namespace fnh
