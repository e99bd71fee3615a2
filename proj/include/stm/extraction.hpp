#pragma once

#include <set>
#include <string>
#include <vector>

#include "stm/corpus.hpp"

namespace stm {

struct MentionSpan {
  int sentence = 0;
  int start = 0;  // token offset within the sentence
  int end = 0;    // exclusive
  friend bool operator==(const MentionSpan&, const MentionSpan&) = default;
};

/// Per-token annotations aligned with a document's token list. Dependency heads are
/// sentence-local 0-based offsets, -1 for the root.
struct ParseAnnotations {
  std::vector<int> dep_head;
  std::vector<std::string> dep_rel;
  std::vector<std::string> ner_tag;
  std::vector<std::vector<MentionSpan>> coref_chains;
};

std::set<std::string> default_speaking_verbs();
/// One lemma per line, `#` comments allowed.
std::set<std::string> load_speaking_verbs(const std::string& path);

/// Named sources: coreference chains containing a PERSON mention and at least one
/// mention that is the nsubj of a speaking verb (or the object of "according to").
/// PERSON subjects outside every chain form singleton chains. Sources come out ordered
/// by first mention.
std::vector<SourceMention> extract_sources(const std::vector<Token>& tokens, const ParseAnnotations& parses,
                                           const std::set<std::string>& speaking_verbs);

/// Sentence-granular switch values. A sentence owned by one source maps all its tokens to
/// that source; in a contested sentence each token goes to the source with the nearest
/// anchor, ties to the earlier-mentioned source.
std::vector<int> assign_gamma(const std::vector<Token>& tokens, const std::vector<SourceMention>& sources);

}  // namespace stm
