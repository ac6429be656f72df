#include "fnh/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "fnh/errors.hpp"
#include "fnh/util.hpp"

namespace fnh {

namespace {

using nlohmann::json;

[[noreturn]] void record_error(std::size_t line, const std::string& what) {
  throw CorpusError("line " + std::to_string(line) + ": " + what);
}

std::string require_string(const json& record, const char* field, std::size_t line) {
  auto it = record.find(field);
  if (it == record.end()) record_error(line, std::string("missing field \"") + field + "\"");
  if (!it->is_string()) record_error(line, std::string("field \"") + field + "\" is not a string");
  return it->get<std::string>();
}

bool require_bool(const json& record, const char* field, std::size_t line) {
  auto it = record.find(field);
  if (it == record.end()) record_error(line, std::string("missing field \"") + field + "\"");
  if (!it->is_boolean()) record_error(line, std::string("field \"") + field + "\" is not a boolean");
  return it->get<bool>();
}

Sample sample_from_record(const json& record, CorpusFormat format, std::size_t line,
                          std::size_t index) {
  if (!record.is_object()) record_error(line, "record is not a JSON object");

  Sample sample;
  switch (format) {
    case CorpusFormat::StrategyQa: {
      if (record.contains("qid")) {
        sample.id = require_string(record, "qid", line);
      } else {
        sample.id = require_string(record, "id", line);
      }
      sample.question = require_string(record, "question", line);
      sample.answer = require_bool(record, "answer", line);
      auto facts = record.find("facts");
      if (facts == record.end()) record_error(line, "missing field \"facts\"");
      if (!facts->is_array()) record_error(line, "field \"facts\" is not an array");
      std::string context;
      for (const json& fact : *facts) {
        if (!fact.is_string()) record_error(line, "field \"facts\" contains a non-string entry");
        if (!context.empty()) context += '\n';
        context += fact.get<std::string>();
      }
      sample.context = std::move(context);
      break;
    }
    case CorpusFormat::BoolQ:
      sample.id = "boolq-" + std::to_string(index);
      sample.question = require_string(record, "question", line);
      sample.context = require_string(record, "passage", line);
      sample.answer = require_bool(record, "answer", line);
      break;
    case CorpusFormat::Normalized:
      sample.id = require_string(record, "id", line);
      sample.question = require_string(record, "question", line);
      sample.context = require_string(record, "context", line);
      sample.answer = require_bool(record, "answer", line);
      break;
  }
  if (sample.question.empty()) record_error(line, "field \"question\" is empty");
  return sample;
}

std::vector<Sample> collect(const std::vector<std::pair<json, std::size_t>>& records,
                            CorpusFormat format) {
  std::vector<Sample> samples;
  samples.reserve(records.size());
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    Sample sample = sample_from_record(records[i].first, format, records[i].second, i);
    if (!seen.insert(sample.id).second) {
      record_error(records[i].second, "duplicate id \"" + sample.id + "\"");
    }
    samples.push_back(std::move(sample));
  }
  return samples;
}

}  // namespace

std::string to_string(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::StrategyQa: return "strategyqa";
    case CorpusFormat::BoolQ: return "boolq";
    case CorpusFormat::Normalized: return "normalized";
  }
  return "normalized";
}

CorpusFormat corpus_format_from_string(const std::string& text) {
  if (text == "strategyqa") return CorpusFormat::StrategyQa;
  if (text == "boolq") return CorpusFormat::BoolQ;
  if (text == "normalized") return CorpusFormat::Normalized;
  throw ConfigError("unknown corpus format: " + text);
}

std::vector<Sample> load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::string content = read_text_file(path);
  std::vector<std::pair<json, std::size_t>> records;

  // StrategyQA dumps ship either as one top-level JSON array or as JSONL.
  std::string_view head = trim(content);
  if (format == CorpusFormat::StrategyQa && !head.empty() && head.front() == '[') {
    json root;
    try {
      root = json::parse(content);
    } catch (const json::exception& ex) {
      throw CorpusError(path.string() + ": " + ex.what());
    }
    for (const json& record : root) records.emplace_back(record, 1);
  } else {
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      try {
        records.emplace_back(json::parse(line), line_no);
      } catch (const json::exception& ex) {
        record_error(line_no, ex.what());
      }
    }
  }
  return collect(records, format);
}

std::vector<Sample> subset(const std::vector<Sample>& samples, std::size_t limit) {
  std::size_t n = std::min(limit, samples.size());
  return std::vector<Sample>(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(n));
}

void save_splits(const std::filesystem::path& path, const std::vector<SplitLabel>& labels) {
  std::unordered_set<std::string> seen;
  std::string out;
  for (const SplitLabel& label : labels) {
    if (!seen.insert(label.sample_id).second) {
      throw CorpusError("duplicate split label for sample \"" + label.sample_id + "\"");
    }
    json record = {
        {"sample_id", label.sample_id},
        {"label", to_string(label.label)},
        {"closed_book_label", to_string(label.closed_book_label)},
        {"closed_book_raw", label.closed_book_raw},
    };
    out += record.dump();
    out += '\n';
  }
  write_text_file_atomic(path, out);
}

std::vector<SplitLabel> load_splits(const std::filesystem::path& path,
                                    const std::vector<Sample>& corpus) {
  std::unordered_set<std::string> known;
  for (const Sample& sample : corpus) known.insert(sample.id);

  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open splits file: " + path.string());

  std::vector<SplitLabel> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& ex) {
      record_error(line_no, ex.what());
    }
    SplitLabel label;
    label.sample_id = require_string(record, "sample_id", line_no);
    label.label = split_kind_from_string(require_string(record, "label", line_no));
    label.closed_book_label = label_from_string(require_string(record, "closed_book_label", line_no));
    label.closed_book_raw = require_string(record, "closed_book_raw", line_no);
    if (!known.count(label.sample_id)) {
      record_error(line_no, "unknown sample id \"" + label.sample_id + "\"");
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

}  // namespace fnh
