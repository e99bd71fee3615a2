#include "stm/extraction.hpp"

#include <algorithm>
#include <climits>
#include <map>

#include "stm/detail/strings.hpp"
#include "stm/error.hpp"

namespace stm {

namespace {

constexpr std::string_view kAccord = "accord";

bool is_person(const std::string& tag) { return tag == "PERSON" || tag == "B-PERSON" || tag == "I-PERSON"; }

bool is_object_rel(const std::string& rel) {
  return rel == "pobj" || rel == "obl" || rel == "nmod" || rel == "obl:according_to" ||
         rel == "nmod:according_to";
}

struct Layout {
  std::vector<int> sentence_start;  // document index of each sentence's first token

  int global(int sentence, int offset) const { return sentence_start[static_cast<std::size_t>(sentence)] + offset; }
};

Layout check_and_layout(const std::vector<Token>& tokens, const ParseAnnotations& parses) {
  const auto n = tokens.size();
  if (parses.dep_head.size() != n || parses.dep_rel.size() != n || parses.ner_tag.size() != n)
    throw ValidationError("malformed parse: annotations cover " + std::to_string(parses.dep_head.size()) +
                          " of " + std::to_string(n) + " tokens");
  Layout layout;
  for (std::size_t i = 0; i < n; ++i) {
    if (tokens[i].position != static_cast<int>(i))
      throw ValidationError("malformed parse: token positions must equal their document offsets");
    int s = tokens[i].sentence_index;
    if (i == 0 ? s != 0 : (s != tokens[i - 1].sentence_index && s != tokens[i - 1].sentence_index + 1))
      throw ValidationError("malformed parse: sentence indices must be dense and non-decreasing");
    if (static_cast<int>(layout.sentence_start.size()) == s) layout.sentence_start.push_back(static_cast<int>(i));
  }
  layout.sentence_start.push_back(static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    int s = tokens[i].sentence_index;
    int len = layout.sentence_start[static_cast<std::size_t>(s) + 1] - layout.sentence_start[static_cast<std::size_t>(s)];
    int head = parses.dep_head[i];
    if (head < -1 || head >= len)
      throw ValidationError("malformed parse: dependency head " + std::to_string(head) + " of token " +
                            std::to_string(i) + " is out of range");
  }
  return layout;
}

}  // namespace

std::set<std::string> default_speaking_verbs() {
  return {"say", "recall", "continue", "add", "tell", std::string(kAccord)};
}

std::set<std::string> load_speaking_verbs(const std::string& path) {
  std::set<std::string> verbs;
  const std::string text = detail::read_file(path);
  for (auto raw : detail::split(text, '\n')) {
    auto line = detail::trim(detail::strip_comment(raw));
    if (!line.empty()) verbs.insert(detail::to_lower(line));
  }
  if (verbs.empty()) throw ValidationError(path + ": speaking-verb list is empty");
  return verbs;
}

std::vector<SourceMention> extract_sources(const std::vector<Token>& tokens, const ParseAnnotations& parses,
                                           const std::set<std::string>& speaking_verbs) {
  if (speaking_verbs.empty()) throw ValidationError("speaking-verb set is empty");
  const Layout layout = check_and_layout(tokens, parses);
  const int n = static_cast<int>(tokens.size());
  const int num_sentences = static_cast<int>(layout.sentence_start.size()) - 1;

  // Chains as lists of document-global [begin, end) spans.
  struct Chain {
    int id;
    std::vector<std::pair<int, int>> spans;
  };
  std::vector<Chain> chains;
  std::vector<int> chain_of(static_cast<std::size_t>(n), -1);
  std::set<std::pair<int, int>> seen_spans;
  for (std::size_t c = 0; c < parses.coref_chains.size(); ++c) {
    Chain chain{static_cast<int>(c), {}};
    for (const auto& m : parses.coref_chains[c]) {
      if (m.sentence < 0 || m.sentence >= num_sentences)
        throw ValidationError("malformed parse: mention sentence " + std::to_string(m.sentence) + " out of range");
      int len = layout.sentence_start[static_cast<std::size_t>(m.sentence) + 1] -
                layout.sentence_start[static_cast<std::size_t>(m.sentence)];
      if (m.start < 0 || m.end > len || m.start >= m.end)
        throw ValidationError("malformed parse: mention span out of range in sentence " + std::to_string(m.sentence));
      std::pair<int, int> span{layout.global(m.sentence, m.start), layout.global(m.sentence, m.end)};
      if (!seen_spans.insert(span).second)
        throw ValidationError("malformed parse: mention appears in two coreference chains");
      chain.spans.push_back(span);
      for (int t = span.first; t < span.second; ++t)
        if (chain_of[static_cast<std::size_t>(t)] < 0) chain_of[static_cast<std::size_t>(t)] = static_cast<int>(c);
    }
    std::sort(chain.spans.begin(), chain.spans.end());
    chains.push_back(std::move(chain));
  }

  auto lemma_at = [&](int sentence_start, int head) -> const std::string& {
    return tokens[static_cast<std::size_t>(sentence_start + head)].lemma;
  };

  // Quote attributions: chain -> speaking-verb positions.
  std::map<int, std::vector<int>> quotes;
  for (int t = 0; t < n; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    const int head = parses.dep_head[ti];
    if (head < 0) continue;
    const int start = layout.sentence_start[static_cast<std::size_t>(tokens[ti].sentence_index)];
    int verb = -1;
    if (parses.dep_rel[ti] == "nsubj" && speaking_verbs.contains(lemma_at(start, head))) {
      verb = start + head;
    } else if (speaking_verbs.contains(std::string(kAccord)) && is_object_rel(parses.dep_rel[ti])) {
      if (lemma_at(start, head) == kAccord) {
        verb = start + head;
      } else if (lemma_at(start, head) == "to") {
        int up = parses.dep_head[static_cast<std::size_t>(start + head)];
        if (up >= 0 && lemma_at(start, up) == kAccord) verb = start + up;
      }
    }
    if (verb < 0) continue;

    int c = chain_of[ti];
    if (c < 0) {
      if (!is_person(parses.ner_tag[ti])) continue;
      // Unchained PERSON subject: its contiguous PERSON run becomes a singleton chain.
      const int end_of_sentence = layout.sentence_start[static_cast<std::size_t>(tokens[ti].sentence_index) + 1];
      int b = t, e = t + 1;
      while (b > start && is_person(parses.ner_tag[static_cast<std::size_t>(b - 1)]) && chain_of[static_cast<std::size_t>(b - 1)] < 0) --b;
      while (e < end_of_sentence && is_person(parses.ner_tag[static_cast<std::size_t>(e)]) && chain_of[static_cast<std::size_t>(e)] < 0) ++e;
      c = static_cast<int>(chains.size());
      chains.push_back(Chain{c, {{b, e}}});
      for (int k = b; k < e; ++k) chain_of[static_cast<std::size_t>(k)] = c;
    }
    quotes[c].push_back(verb);
  }

  std::vector<std::pair<int, SourceMention>> found;  // (first mention position, source)
  for (const auto& [c, verbs] : quotes) {
    const auto& chain = chains[static_cast<std::size_t>(c)];
    std::string name;
    for (const auto& [b, e] : chain.spans) {
      for (int t = b; t < e; ++t) {
        if (!is_person(parses.ner_tag[static_cast<std::size_t>(t)])) continue;
        if (!name.empty()) name += ' ';
        name += tokens[static_cast<std::size_t>(t)].surface;
      }
      if (!name.empty()) break;
    }
    if (name.empty()) continue;

    const int first = chain.spans.front().first;
    SourceMention src;
    src.canonical_name = std::move(name);
    src.chain_id = chain.id;
    src.sentence_indices.insert(tokens[static_cast<std::size_t>(first)].sentence_index);
    for (int v : verbs) {
      src.sentence_indices.insert(tokens[static_cast<std::size_t>(v)].sentence_index);
      src.anchors.push_back(v);
    }
    std::sort(src.anchors.begin(), src.anchors.end());
    src.anchors.erase(std::unique(src.anchors.begin(), src.anchors.end()), src.anchors.end());
    found.emplace_back(first, std::move(src));
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<SourceMention> out;
  out.reserve(found.size());
  for (auto& [pos, src] : found) out.push_back(std::move(src));
  return out;
}

std::vector<int> assign_gamma(const std::vector<Token>& tokens, const std::vector<SourceMention>& sources) {
  std::vector<int> gamma(tokens.size(), kBackground);
  std::map<int, std::vector<int>> claimants;
  for (std::size_t s = 0; s < sources.size(); ++s)
    for (int sentence : sources[s].sentence_indices) claimants[sentence].push_back(static_cast<int>(s));

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = claimants.find(tokens[i].sentence_index);
    if (it == claimants.end()) continue;
    const auto& owners = it->second;
    if (owners.size() == 1) {
      gamma[i] = owners.front();
      continue;
    }
    // Contested sentence: nearest attributed speaking verb wins, ties to the earlier source.
    int best = owners.front();
    int best_distance = INT_MAX;
    for (int s : owners) {
      int distance = INT_MAX;
      for (int a : sources[static_cast<std::size_t>(s)].anchors) distance = std::min(distance, std::abs(a - tokens[i].position));
      if (distance < best_distance) {
        best = s;
        best_distance = distance;
      }
    }
    gamma[i] = best;
  }
  return gamma;
}

}  // namespace stm
