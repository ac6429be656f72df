#include "fnh/prompts.hpp"

#include "fnh/util.hpp"

namespace fnh {

namespace {

// Template literals. Explicit "\n" line endings, no trailing whitespace.
// The rewrite instruction's "question. so that" wording is intentional and
// must not be "fixed": golden tests pin these strings byte-for-byte.

constexpr const char* kSubquestionInstruction =
    "Please think step-by-step and deconstruct the question down to five or less "
    "sub-questions. Write sub-questions with numbers.";

constexpr const char* kFactExtractionInstruction =
    "Extract facts from the document that are relevant to the question. You should neither "
    "corrupt any facts in the document nor include any conclusion or reasoning. Write facts "
    "with numbers.";

constexpr const char* kReorganizationInstruction =
    "Based on the question, select and reorder facts from the given list of facts. You should "
    "neither corrupt any facts nor include any conclusion or reasoning.";

constexpr const char* kRewriteInstruction =
    "Your role is to rewrite the given question into a fluent and natural question. so that "
    "you can understand the intent of the question. You should rewrite the question using the "
    "given context that has the information about the answer. You should preserve the shape of "
    "the question. For example, if the given question is yes-no question, the rewritten "
    "question should also be yes-no question.";

constexpr const char* kEvalOriginalInstruction =
    "According to the given context and the dialogue about the context, answer the question "
    "with True or False.";

constexpr const char* kEvalStatementInstruction =
    "According to the given context and the dialogue about the context, determine whether the "
    "given statement is True or False.";

std::vector<Message> user_message(std::string content) {
  return {Message{Role::User, std::move(content)}};
}

}  // namespace

bool negate(bool answer) { return !answer; }

std::string render_statement(const std::string& question, bool label) {
  return "The answer to the question " + question + " is " + (label ? "True" : "False") + ".";
}

std::string serialize_dialog(const DialogHistory& dialog) {
  std::string out;
  for (const DialogTurn& turn : dialog) {
    if (!out.empty()) out += '\n';
    out += "Question: " + turn.question + "\nAnswer: " + turn.answer;
  }
  return out;
}

std::vector<Message> render_evaluation(PromptMode mode, const std::string& context,
                                       const std::string& question, bool answer,
                                       const std::optional<DialogHistory>& dialog) {
  std::string final_line = mode == PromptMode::Original
                               ? "Question: " + question
                               : "Statement: " + render_statement(
                                     question, mode == PromptMode::AllTrue ? answer : !answer);

  if (dialog.has_value()) {
    std::string prompt = mode == PromptMode::Original ? kEvalOriginalInstruction
                                                      : kEvalStatementInstruction;
    prompt += "\n[Context]\n" + context + "\n[Dialog]\n";
    std::string history = serialize_dialog(*dialog);
    if (!history.empty()) prompt += history + "\n";
    prompt += final_line + "\nAnswer:";
    return user_message(std::move(prompt));
  }

  // Bare single-block form: context paragraph, then the query paragraph.
  return user_message("Context: " + context + "\n\n" + final_line + "\nAnswer:");
}

std::vector<Message> render_statement_evaluation(const std::string& context,
                                                 const std::string& statement) {
  return user_message("Context: " + context + "\nStatement: " + statement + "\n\nAnswer:");
}

std::vector<Message> render_closed_book(PromptMode mode, const std::string& question,
                                        bool answer) {
  std::string final_line = mode == PromptMode::Original
                               ? "Question: " + question
                               : "Statement: " + render_statement(
                                     question, mode == PromptMode::AllTrue ? answer : !answer);
  return user_message(final_line + "\nAnswer:");
}

std::vector<Message> render_subquestion_prompt(const std::string& question) {
  return user_message(std::string(kSubquestionInstruction) + "\nQuestion: " + question +
                      "\nSub-questions:");
}

std::vector<Message> render_fact_extraction_prompt(const std::string& document,
                                                   const std::string& sub_question) {
  return user_message(std::string(kFactExtractionInstruction) + "\nDocument: " + document +
                      "\nQuestion: " + sub_question + "\nRelevant Facts:");
}

std::vector<Message> render_reorganization_prompt(const std::string& facts,
                                                  const std::string& question) {
  return user_message(std::string(kReorganizationInstruction) + "\nFacts: " + facts +
                      "\nQuestion: " + question + "\nSelected and Reordered Facts:");
}

std::vector<Message> render_rewrite_prompt(const std::string& context,
                                           const std::string& question) {
  return user_message(std::string(kRewriteInstruction) + "\nContext: " + context +
                      "\nQuestion: " + question + "\nRewritten:");
}

std::string template_version_hash() {
  std::string all;
  for (const char* t : {kSubquestionInstruction, kFactExtractionInstruction,
                        kReorganizationInstruction, kRewriteInstruction,
                        kEvalOriginalInstruction, kEvalStatementInstruction}) {
    all += t;
    all += '\n';
  }
  return sha256_hex(all);
}

}  // namespace fnh
