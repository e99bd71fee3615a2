#include "stm/io.hpp"

#include <fstream>

#include "stm/detail/strings.hpp"
#include "stm/error.hpp"

namespace stm::io {

namespace {

std::map<int, std::string> chain_labels(const Json& j, const char* key) {
  std::map<int, std::string> out;
  if (!j.contains(key)) return out;
  for (const auto& [chain, label] : j.at(key).items()) {
    int id = 0;
    try {
      id = std::stoi(chain);
    } catch (const std::exception&) {
      throw ValidationError(std::string(key) + ": chain id '" + chain + "' is not an integer");
    }
    out.emplace(id, label.get<std::string>());
  }
  return out;
}

}  // namespace

ParsedDocument parsed_document_from_json(const Json& j) {
  ParsedDocument out;
  auto& doc = out.document;
  doc.doc_id = j.at("doc_id").get<std::string>();
  if (j.contains("timestamp") && !j.at("timestamp").is_null())
    doc.timestamp = Date::parse_iso(j.at("timestamp").get<std::string>());
  if (j.contains("gold_doc_type") && !j.at("gold_doc_type").is_null()) doc.gold_doc_type = j.at("gold_doc_type").get<int>();

  int sentence = 0;
  for (const auto& s : j.at("sentences")) {
    for (const auto& t : s.at("tokens")) {
      Token tok;
      tok.surface = t.at("surface").get<std::string>();
      tok.lemma = detail::to_lower(t.value("lemma", tok.surface));
      tok.sentence_index = sentence;
      tok.position = static_cast<int>(doc.tokens.size());
      doc.tokens.push_back(std::move(tok));
      out.parses.dep_head.push_back(t.value("dep_head", -1));
      out.parses.dep_rel.push_back(t.value("dep_rel", std::string()));
      out.parses.ner_tag.push_back(t.value("ner_tag", std::string("O")));
    }
    ++sentence;
  }
  if (j.contains("coref_chains")) {
    for (const auto& chain : j.at("coref_chains")) {
      std::vector<MentionSpan> mentions;
      for (const auto& m : chain)
        mentions.push_back({m.at("sentence").get<int>(), m.at("start").get<int>(), m.at("end").get<int>()});
      out.parses.coref_chains.push_back(std::move(mentions));
    }
  }
  out.gold_sources = chain_labels(j, "gold_sources");
  out.heldout_sources = chain_labels(j, "heldout_sources");
  return out;
}

Document extract_document(const ParsedDocument& parsed, const LabelSpace& labels, const ExtractionOptions& options) {
  Document doc = parsed.document;
  for (auto& t : doc.tokens) t.is_stopword = options.stopwords.contains(t.lemma);
  doc.sources = extract_sources(doc.tokens, parsed.parses, options.speaking_verbs);
  for (auto& s : doc.sources) {
    if (auto it = parsed.gold_sources.find(s.chain_id); it != parsed.gold_sources.end()) {
      s.gold_label = labels.parse_label(it->second);
      s.clamped = true;
    } else if (auto h = parsed.heldout_sources.find(s.chain_id); h != parsed.heldout_sources.end()) {
      s.gold_label = labels.parse_label(h->second);
    }
  }
  doc.gamma = assign_gamma(doc.tokens, doc.sources);
  return doc;
}

Json document_to_json(const Document& doc) {
  Json j;
  j["doc_id"] = doc.doc_id;
  if (doc.timestamp) j["timestamp"] = doc.timestamp->iso();
  if (doc.gold_doc_type) j["gold_doc_type"] = *doc.gold_doc_type;
  Json tokens = Json::array();
  for (const auto& t : doc.tokens) {
    Json tj = {{"surface", t.surface}, {"lemma", t.lemma}, {"sentence", t.sentence_index}};
    if (t.is_stopword) tj["stopword"] = true;
    tokens.push_back(std::move(tj));
  }
  j["tokens"] = std::move(tokens);
  Json sources = Json::array();
  for (const auto& s : doc.sources) {
    Json sj = {{"name", s.canonical_name},
               {"chain_id", s.chain_id},
               {"sentences", std::vector<int>(s.sentence_indices.begin(), s.sentence_indices.end())},
               {"anchors", s.anchors}};
    if (s.gold_label) sj["gold_label"] = format_source_type(*s.gold_label);
    if (s.clamped) sj["clamped"] = true;
    sources.push_back(std::move(sj));
  }
  j["sources"] = std::move(sources);
  j["gamma"] = doc.gamma;
  return j;
}

Document document_from_json(const Json& j, const LabelSpace& labels) {
  Document doc;
  doc.doc_id = j.at("doc_id").get<std::string>();
  if (j.contains("timestamp") && !j.at("timestamp").is_null())
    doc.timestamp = Date::parse_iso(j.at("timestamp").get<std::string>());
  if (j.contains("gold_doc_type") && !j.at("gold_doc_type").is_null()) doc.gold_doc_type = j.at("gold_doc_type").get<int>();
  for (const auto& t : j.at("tokens")) {
    Token tok;
    tok.surface = t.at("surface").get<std::string>();
    tok.lemma = t.value("lemma", tok.surface);
    tok.sentence_index = t.value("sentence", 0);
    tok.position = static_cast<int>(doc.tokens.size());
    tok.is_stopword = t.value("stopword", false);
    doc.tokens.push_back(std::move(tok));
  }
  for (const auto& sj : j.at("sources")) {
    SourceMention s;
    s.canonical_name = sj.value("name", std::string());
    s.chain_id = sj.value("chain_id", 0);
    for (int x : sj.value("sentences", std::vector<int>{})) s.sentence_indices.insert(x);
    s.anchors = sj.value("anchors", std::vector<int>{});
    if (sj.contains("gold_label") && !sj.at("gold_label").is_null())
      s.gold_label = labels.parse_label(sj.at("gold_label").get<std::string>());
    s.clamped = sj.value("clamped", false);
    doc.sources.push_back(std::move(s));
  }
  doc.gamma = j.at("gamma").get<std::vector<int>>();
  doc.validate();
  return doc;
}

std::vector<ParsedDocument> read_parsed_jsonl(const std::string& path) {
  std::vector<ParsedDocument> out;
  for_each_jsonl(path, [&](const Json& j, int) { out.push_back(parsed_document_from_json(j)); });
  return out;
}

std::vector<Document> read_corpus_jsonl(const std::string& path, const LabelSpace& labels) {
  std::vector<Document> out;
  for_each_jsonl(path, [&](const Json& j, int) { out.push_back(document_from_json(j, labels)); });
  return out;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw IoError("error writing '" + path + "'");
}

void write_corpus_jsonl(const std::string& path, const std::vector<Document>& docs) {
  std::string buf;
  for (const auto& d : docs) {
    buf += document_to_json(d).dump();
    buf += '\n';
  }
  write_text(path, buf);
}

std::vector<TruthRecord> read_truth_jsonl(const std::string& path, const LabelSpace& labels) {
  std::vector<TruthRecord> out;
  for_each_jsonl(path, [&](const Json& j, int) {
    TruthRecord r;
    r.doc_id = j.at("doc_id").get<std::string>();
    if (j.contains("doc_type") && !j.at("doc_type").is_null()) r.doc_type = j.at("doc_type").get<int>();
    if (j.contains("source_types"))
      for (const auto& s : j.at("source_types"))
        r.source_types.push_back(s.is_null() ? std::nullopt
                                             : std::optional<SourceType>(labels.parse_label(s.get<std::string>())));
    out.push_back(std::move(r));
  });
  return out;
}

void write_truth_jsonl(const std::string& path, const std::vector<TruthRecord>& truth) {
  std::string buf;
  for (const auto& r : truth) {
    Json j;
    j["doc_id"] = r.doc_id;
    if (r.doc_type) j["doc_type"] = *r.doc_type;
    Json types = Json::array();
    for (const auto& s : r.source_types) types.push_back(s ? Json(format_source_type(*s)) : Json(nullptr));
    j["source_types"] = std::move(types);
    buf += j.dump();
    buf += '\n';
  }
  write_text(path, buf);
}

}  // namespace stm::io
