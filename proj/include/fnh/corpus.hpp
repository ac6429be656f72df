#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "fnh/types.hpp"

namespace fnh {

enum class CorpusFormat { StrategyQa, BoolQ, Normalized };

std::string to_string(CorpusFormat format);
CorpusFormat corpus_format_from_string(const std::string& text);

// Loads a yes/no QA corpus into Samples, preserving record order.
//
//   strategyqa  JSON array or JSONL of {qid|id, question, answer, facts[]};
//               context = facts joined with "\n"
//   boolq       JSONL of {question, answer, passage}; context = passage,
//               ids synthesized as "boolq-<record index>"
//   normalized  JSONL of {id, question, context, answer}
//
// Malformed records raise CorpusError naming the line and missing field;
// duplicate ids raise CorpusError.
std::vector<Sample> load_corpus(const std::filesystem::path& path, CorpusFormat format);

// First min(limit, size) samples, original order.
std::vector<Sample> subset(const std::vector<Sample>& samples, std::size_t limit);

// Splits file: JSONL of {sample_id, label, closed_book_label, closed_book_raw}.
// save_splits rejects duplicate sample ids; load_splits rejects ids absent
// from the corpus. load(save(x)) == x.
void save_splits(const std::filesystem::path& path, const std::vector<SplitLabel>& labels);
std::vector<SplitLabel> load_splits(const std::filesystem::path& path,
                                    const std::vector<Sample>& corpus);

}  // namespace fnh
