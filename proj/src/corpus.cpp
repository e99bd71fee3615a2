#include "stm/corpus.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>

#include "stm/error.hpp"

namespace stm {

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

Date Date::parse_iso(const std::string& text) {
  auto bad = [&] { return ValidationError("invalid ISO-8601 date '" + text + "'"); };
  if (text.size() < 7) throw bad();
  Date d;
  auto read = [&](std::size_t pos, std::size_t len, int& out) {
    if (pos + len > text.size()) throw bad();
    auto [p, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    if (ec != std::errc() || p != text.data() + pos + len) throw bad();
  };
  read(0, 4, d.year);
  if (text[4] != '-') throw bad();
  read(5, 2, d.month);
  if (text.size() > 7) {
    if (text[7] != '-' || text.size() < 10) throw bad();
    read(8, 2, d.day);
  }
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) throw bad();
  return d;
}

void Document::validate() const {
  auto where = "document '" + doc_id + "': ";
  if (gamma.size() != tokens.size())
    throw ValidationError(where + "gamma has " + std::to_string(gamma.size()) + " entries for " +
                          std::to_string(tokens.size()) + " tokens");
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && tokens[i].position <= tokens[i - 1].position)
      throw ValidationError(where + "token positions must be strictly increasing");
    if (i > 0 && tokens[i].sentence_index < tokens[i - 1].sentence_index)
      throw ValidationError(where + "sentence indices must be non-decreasing");
    if (gamma[i] != kBackground && (gamma[i] < 0 || gamma[i] >= static_cast<int>(sources.size())))
      throw ValidationError(where + "gamma value " + std::to_string(gamma[i]) + " names no source");
  }
  for (const auto& s : sources)
    if (s.clamped && !s.gold_label) throw ValidationError(where + "clamped source '" + s.canonical_name + "' has no gold label");
}

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], static_cast<int>(i)).second)
      throw ValidationError("duplicate vocabulary term '" + terms_[i] + "'");
  }
}

int Vocabulary::id(const std::string& term) const {
  auto it = index_.find(term);
  return it == index_.end() ? -1 : it->second;
}

std::uint32_t Vocabulary::hash() const {
  uLong crc = crc32(0L, Z_NULL, 0);
  for (const auto& t : terms_) {
    crc = crc32(crc, reinterpret_cast<const Bytef*>(t.data()), static_cast<uInt>(t.size()));
    const Bytef nul = 0;
    crc = crc32(crc, &nul, 1);
  }
  return static_cast<std::uint32_t>(crc);
}

Vocabulary build_vocabulary(const std::vector<Document>& documents, int min_count,
                            const std::set<std::string>& stopwords) {
  if (min_count < 1) throw ValidationError("min_count must be >= 1");
  std::map<std::string, long> freq;
  for (const auto& doc : documents)
    for (const auto& tok : doc.tokens)
      if (!tok.is_stopword && !stopwords.contains(tok.lemma)) ++freq[tok.lemma];

  std::vector<std::pair<std::string, long>> kept;
  for (auto& [term, n] : freq)
    if (n >= min_count) kept.emplace_back(term, n);
  if (kept.empty()) throw ValidationError("vocabulary is empty after filtering");
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<std::string> terms;
  terms.reserve(kept.size());
  for (auto& [term, n] : kept) terms.push_back(term);
  return Vocabulary(std::move(terms));
}

std::size_t Corpus::num_sources() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.sources.size();
  return n;
}

std::size_t Corpus::num_tokens() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.tokens.size();
  return n;
}

void Corpus::validate() const {
  for (const auto& d : documents) {
    d.validate();
    for (const auto& s : d.sources)
      if (s.gold_label && !label_space.find(s.gold_label->affiliation, s.gold_label->role))
        throw ValidationError("document '" + d.doc_id + "': gold label '" + format_source_type(*s.gold_label) +
                              "' is outside the label space");
  }
}

Corpus filter_corpus(const Corpus& corpus) {
  Corpus out{{}, corpus.vocabulary, corpus.label_space};
  std::copy_if(corpus.documents.begin(), corpus.documents.end(), std::back_inserter(out.documents),
               [](const Document& d) { return !d.sources.empty(); });
  return out;
}

std::set<std::string> default_stopwords() {
  return {"a",    "an",   "and",  "are",  "as",   "at",    "be",    "but",  "by",    "for",   "from",
          "has",  "have", "he",   "her",  "his",  "i",     "in",    "is",   "it",    "its",   "of",
          "on",   "or",   "she",  "that", "the",  "their", "they",  "this", "to",    "was",   "we",
          "were", "will", "with", "you",  "not",  "been",  "which", "who",  "would", "there", ",",
          ".",    "``",   "''",   "\"",   "'",    ":",     ";",     "-",    "--",    "(",     ")"};
}

}  // namespace stm
