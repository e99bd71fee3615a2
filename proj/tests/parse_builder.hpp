#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "stm/corpus.hpp"
#include "stm/extraction.hpp"

namespace stm::testing {

/// (surface, lemma, sentence-local head or -1, relation, NER tag)
using Tok = std::tuple<std::string, std::string, int, std::string, std::string>;

struct Parsed {
  std::vector<Token> tokens;
  ParseAnnotations parses;

  Parsed& sentence(const std::vector<Tok>& toks) {
    const int s = tokens.empty() ? 0 : tokens.back().sentence_index + 1;
    for (const auto& [surface, lemma, head, rel, ner] : toks) {
      tokens.push_back({surface, lemma, s, static_cast<int>(tokens.size()), false});
      parses.dep_head.push_back(head);
      parses.dep_rel.push_back(rel);
      parses.ner_tag.push_back(ner);
    }
    return *this;
  }
  Parsed& chain(std::vector<MentionSpan> mentions) {
    parses.coref_chains.push_back(std::move(mentions));
    return *this;
  }
};

/// "Representative David R. Obey, a Wisconsin Democrat who serves on the Appropriations
/// Committee, said, ``The President and other officials discredit the budget process by
/// not sending us serious proposals.''"
inline std::vector<Tok> box1_sentence() {
  return {{"Representative", "representative", 3, "compound", "O"},
          {"David", "david", 3, "compound", "PERSON"},
          {"R.", "r.", 3, "compound", "PERSON"},
          {"Obey", "obey", 15, "nsubj", "PERSON"},
          {",", ",", 3, "punct", "O"},
          {"a", "a", 7, "det", "O"},
          {"Wisconsin", "wisconsin", 7, "compound", "GPE"},
          {"Democrat", "democrat", 3, "appos", "NORP"},
          {"who", "who", 9, "nsubj", "O"},
          {"serves", "serve", 7, "relcl", "O"},
          {"on", "on", 13, "case", "O"},
          {"the", "the", 13, "det", "O"},
          {"Appropriations", "appropriations", 13, "compound", "ORG"},
          {"Committee", "committee", 9, "obl", "ORG"},
          {",", ",", 3, "punct", "O"},
          {"said", "say", -1, "root", "O"},
          {",", ",", 15, "punct", "O"},
          {"``", "``", 15, "punct", "O"},
          {"The", "the", 19, "det", "O"},
          {"President", "president", 23, "nsubj", "O"},
          {"and", "and", 22, "cc", "O"},
          {"other", "other", 22, "amod", "O"},
          {"officials", "official", 19, "conj", "O"},
          {"discredit", "discredit", 15, "ccomp", "O"},
          {"the", "the", 26, "det", "O"},
          {"budget", "budget", 26, "compound", "O"},
          {"process", "process", 23, "obj", "O"},
          {"by", "by", 29, "mark", "O"},
          {"not", "not", 29, "advmod", "O"},
          {"sending", "send", 23, "advcl", "O"},
          {"us", "we", 29, "iobj", "O"},
          {"serious", "serious", 32, "amod", "O"},
          {"proposals", "proposal", 29, "obj", "O"},
          {".", ".", 15, "punct", "O"},
          {"''", "''", 15, "punct", "O"}};
}

}  // namespace stm::testing
