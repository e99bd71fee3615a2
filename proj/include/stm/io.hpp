#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "stm/corpus.hpp"
#include "stm/extraction.hpp"

namespace stm::io {

using Json = nlohmann::json;

/// One line of the pre-parsed input format.
struct ParsedDocument {
  Document document;  // tokens, timestamp and gold_doc_type filled; no sources yet
  ParseAnnotations parses;
  std::map<int, std::string> gold_sources;     // chain_id -> label; clamped during training
  std::map<int, std::string> heldout_sources;  // chain_id -> label; evaluation only
};

ParsedDocument parsed_document_from_json(const Json& j);

struct ExtractionOptions {
  std::set<std::string> speaking_verbs = default_speaking_verbs();
  std::set<std::string> stopwords = default_stopwords();
};

/// Runs source extraction and gamma assignment, then attaches gold labels by chain id.
Document extract_document(const ParsedDocument& parsed, const LabelSpace& labels, const ExtractionOptions& options);

Json document_to_json(const Document& doc);
Document document_from_json(const Json& j, const LabelSpace& labels);

/// Calls `fn(json, line_number)` for each non-empty line; JSON syntax errors are
/// reported as ValidationError naming the line.
template <typename Fn>
void for_each_jsonl(const std::string& path, Fn&& fn);

std::vector<ParsedDocument> read_parsed_jsonl(const std::string& path);
std::vector<Document> read_corpus_jsonl(const std::string& path, const LabelSpace& labels);
void write_corpus_jsonl(const std::string& path, const std::vector<Document>& docs);

struct TruthRecord {
  std::string doc_id;
  std::optional<int> doc_type;
  std::vector<std::optional<SourceType>> source_types;
};

std::vector<TruthRecord> read_truth_jsonl(const std::string& path, const LabelSpace& labels);
void write_truth_jsonl(const std::string& path, const std::vector<TruthRecord>& truth);

/// Writes `content` to `path`, throwing IoError on failure.
void write_text(const std::string& path, const std::string& content);

}  // namespace stm::io

#include "stm/detail/io_impl.hpp"
