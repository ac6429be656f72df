#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fnh/types.hpp"

namespace fnh {

bool negate(bool answer);

// "The answer to the question {q} is {True|False}."
std::string render_statement(const std::string& question, bool label);

// Dialog turns serialized newest-rewrite first as
// "Question: {q}\nAnswer: {a}" blocks joined by newlines.
std::string serialize_dialog(const DialogHistory& dialog);

// Evaluation prompt for one sample. AllTrue asserts the ground truth,
// AllFalse the negated ground truth, Original asks the question itself.
// With a dialog (possibly empty) the conversation template with [Context]
// and [Dialog] sections is used; without one, the bare single-block form.
std::vector<Message> render_evaluation(PromptMode mode, const std::string& context,
                                       const std::string& question, bool answer,
                                       const std::optional<DialogHistory>& dialog = std::nullopt);

// Variant for corpora that ship statements directly instead of yes/no
// questions. No dialog form.
std::vector<Message> render_statement_evaluation(const std::string& context,
                                                 const std::string& statement);

// Same as render_evaluation without a dialog, with the context section omitted.
std::vector<Message> render_closed_book(PromptMode mode, const std::string& question, bool answer);

std::vector<Message> render_subquestion_prompt(const std::string& question);
std::vector<Message> render_fact_extraction_prompt(const std::string& document,
                                                   const std::string& sub_question);
std::vector<Message> render_reorganization_prompt(const std::string& facts,
                                                  const std::string& question);
std::vector<Message> render_rewrite_prompt(const std::string& context,
                                           const std::string& question);

// Digest over every template literal; recorded in run manifests so reports
// are traceable to the exact prompt wording that produced them.
std::string template_version_hash();

}  // namespace fnh
