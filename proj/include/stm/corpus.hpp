#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "stm/ontology.hpp"

namespace stm {

/// Calendar date with month resolution used for bucketing; day kept for output.
struct Date {
  int year = 0;
  int month = 1;
  int day = 1;

  /// Months since year 0; the bucketing axis.
  int month_index() const { return year * 12 + (month - 1); }
  std::string iso() const;
  static Date parse_iso(const std::string& text);  // YYYY-MM-DD
  static Date from_month_index(int index) { return Date{index / 12, index % 12 + 1, 1}; }

  friend auto operator<=>(const Date&, const Date&) = default;
};

struct Token {
  std::string surface;
  std::string lemma;
  int sentence_index = 0;
  int position = 0;  // document-global, strictly increasing
  bool is_stopword = false;
};

struct SourceMention {
  std::string canonical_name;
  int chain_id = 0;
  std::set<int> sentence_indices;
  /// Document positions of the speaking verbs attributed to this source; the nearest
  /// one decides tokens of sentences claimed by two sources.
  std::vector<int> anchors;
  std::optional<SourceType> gold_label;
  bool clamped = false;
};

/// Observed switch value: kBackground or the index of the owning source.
inline constexpr int kBackground = -1;

struct Document {
  std::string doc_id;
  std::vector<Token> tokens;
  std::vector<SourceMention> sources;
  std::vector<int> gamma;
  std::optional<Date> timestamp;
  std::optional<int> gold_doc_type;

  int num_sentences() const { return tokens.empty() ? 0 : tokens.back().sentence_index + 1; }
  /// Throws ValidationError when gamma/tokens/sources disagree.
  void validate() const;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> terms);

  int size() const { return static_cast<int>(terms_.size()); }
  const std::string& term(int id) const { return terms_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& terms() const { return terms_; }
  /// -1 when absent.
  int id(const std::string& term) const;
  /// CRC-32 over the ordered term list, stored in snapshots.
  std::uint32_t hash() const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.terms_ == b.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, int> index_;
};

/// Terms with corpus frequency >= min_count, stopwords excluded; ids ordered by
/// descending frequency, ties by lemma.
Vocabulary build_vocabulary(const std::vector<Document>& documents, int min_count,
                            const std::set<std::string>& stopwords = {});

struct Corpus {
  std::vector<Document> documents;
  Vocabulary vocabulary;
  LabelSpace label_space = LabelSpace::make_default();

  std::size_t num_sources() const;
  std::size_t num_tokens() const;
  void validate() const;
};

/// Keeps documents with at least one source.
Corpus filter_corpus(const Corpus& corpus);

std::set<std::string> default_stopwords();

}  // namespace stm
