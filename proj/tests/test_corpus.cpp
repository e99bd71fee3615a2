#include "doctest.h"
#include "parse_builder.hpp"
#include "stm/corpus.hpp"
#include "stm/error.hpp"
#include "stm/io.hpp"

#include <filesystem>

using namespace stm;

namespace {

Document doc_from_lemmas(const std::string& id, const std::vector<std::string>& lemmas, int sources = 0) {
  Document d;
  d.doc_id = id;
  for (const auto& l : lemmas) d.tokens.push_back({l, l, 0, static_cast<int>(d.tokens.size()), false});
  for (int s = 0; s < sources; ++s) d.sources.push_back({"src" + std::to_string(s), s, {0}, {}, std::nullopt, false});
  d.gamma.assign(d.tokens.size(), sources > 0 ? 0 : kBackground);
  return d;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("stm_test_corpus_" + name)).string();
}

}  // namespace

TEST_CASE("vocabulary thresholds and ordering") {
  std::vector<Document> docs{doc_from_lemmas("a", {"say", "say", "budget"})};
  auto v1 = build_vocabulary(docs, 1);
  CHECK(v1.size() == 2);
  CHECK(v1.term(0) == "say");
  CHECK(v1.id("budget") == 1);
  CHECK(v1.id("absent") == -1);

  auto v2 = build_vocabulary(docs, 2);
  CHECK(v2.size() == 1);
  CHECK(v2.term(0) == "say");

  CHECK(build_vocabulary(docs, 1) == v1);
  CHECK(build_vocabulary(docs, 1).hash() == v1.hash());

  // equal frequencies fall back to lexicographic order
  auto v3 = build_vocabulary({doc_from_lemmas("b", {"zeta", "alpha", "mid"})}, 1);
  CHECK(v3.terms() == std::vector<std::string>{"alpha", "mid", "zeta"});

  CHECK(build_vocabulary(docs, 1, {"say"}).size() == 1);
  CHECK_THROWS_AS(build_vocabulary(docs, 3), ValidationError);
  CHECK_THROWS_AS(build_vocabulary(docs, 0), ValidationError);
}

TEST_CASE("filter_corpus keeps documents with a source") {
  Corpus c;
  c.documents = {doc_from_lemmas("a", {"x"}, 1), doc_from_lemmas("b", {"y"}, 0), doc_from_lemmas("c", {"z"}, 2)};
  auto f = filter_corpus(c);
  REQUIRE(f.documents.size() == 2);
  CHECK(f.documents[0].doc_id == "a");
  CHECK(f.documents[1].doc_id == "c");

  Corpus none;
  none.documents = {doc_from_lemmas("b", {"y"}, 0)};
  CHECK(filter_corpus(none).documents.empty());
}

TEST_CASE("document validation") {
  auto d = doc_from_lemmas("a", {"x", "y"}, 1);
  CHECK_NOTHROW(d.validate());
  auto bad = d;
  bad.gamma.pop_back();
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = d;
  bad.gamma[0] = 1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = d;
  bad.sources[0].clamped = true;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = d;
  bad.tokens[1].position = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("gamma totals partition the tokens") {
  auto d = doc_from_lemmas("a", {"x", "y", "z"}, 1);
  d.gamma = {0, kBackground, 0};
  long source = 0, background = 0;
  for (int g : d.gamma) (g == kBackground ? background : source)++;
  CHECK(source + background == static_cast<long>(d.tokens.size()));
}

TEST_CASE("dates") {
  auto d = Date::parse_iso("1999-07-15");
  CHECK(d.year == 1999);
  CHECK(d.month == 7);
  CHECK(d.iso() == "1999-07-15");
  CHECK(Date::from_month_index(d.month_index()).iso() == "1999-07-01");
  CHECK_THROWS_AS(Date::parse_iso("1999-13-01"), ValidationError);
  CHECK_THROWS_AS(Date::parse_iso("July 1999"), ValidationError);
}

TEST_CASE("extracted-corpus JSONL round-trip") {
  const auto labels = LabelSpace::make_default();
  auto d = doc_from_lemmas("a", {"x", "y", "z"}, 2);
  d.gamma = {0, 1, kBackground};
  d.tokens[2].is_stopword = true;
  d.tokens[2].sentence_index = 1;
  d.sources[0].gold_label = labels.parse_label("academic-expert");
  d.sources[0].clamped = true;
  d.sources[1].anchors = {1};
  d.sources[1].sentence_indices = {0, 1};
  d.timestamp = Date{2001, 9, 11};
  d.gold_doc_type = 3;

  const auto path = temp_path("roundtrip.jsonl");
  io::write_corpus_jsonl(path, {d});
  auto back = io::read_corpus_jsonl(path, labels);
  REQUIRE(back.size() == 1);
  const auto& b = back[0];
  CHECK(b.doc_id == "a");
  CHECK(b.gamma == d.gamma);
  CHECK(b.tokens[2].is_stopword);
  CHECK(b.tokens[2].sentence_index == 1);
  CHECK(b.sources[0].gold_label == d.sources[0].gold_label);
  CHECK(b.sources[0].clamped);
  CHECK_FALSE(b.sources[1].clamped);
  CHECK(b.sources[1].sentence_indices == std::set<int>{0, 1});
  CHECK(b.sources[1].anchors == std::vector<int>{1});
  CHECK(b.timestamp == d.timestamp);
  CHECK(b.gold_doc_type == 3);
  std::filesystem::remove(path);
}

TEST_CASE("JSONL errors carry the line number") {
  const auto path = temp_path("broken.jsonl");
  io::write_text(path, "{\"doc_id\":\"a\",\"tokens\":[],\"sources\":[],\"gamma\":[]}\n{not json\n");
  CHECK_THROWS_WITH_AS(io::read_corpus_jsonl(path, LabelSpace::make_default()), doctest::Contains(":2:"),
                       ValidationError);
  io::write_text(path, "\n{\"doc_id\":\"a\"}\n");
  CHECK_THROWS_WITH_AS(io::read_corpus_jsonl(path, LabelSpace::make_default()), doctest::Contains(":2:"),
                       ValidationError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(io::read_corpus_jsonl(path, LabelSpace::make_default()), IoError);
}

TEST_CASE("parsed input: extraction with gold and held-out labels") {
  using stm::testing::Tok;
  io::Json sentence = io::Json::array();
  std::vector<Tok> box1 = stm::testing::box1_sentence();
  for (const auto& [surface, lemma, head, rel, ner] : box1)
    sentence.push_back({{"surface", surface}, {"lemma", lemma}, {"dep_head", head}, {"dep_rel", rel}, {"ner_tag", ner}});
  io::Json j = {{"doc_id", "box1"},
                {"timestamp", "1994-02-03"},
                {"sentences", {{{"tokens", sentence}}}},
                {"coref_chains", {{{{"sentence", 0}, {"start", 1}, {"end", 4}}}}},
                {"gold_sources", {{"0", "government-decision-maker"}}}};
  const auto labels = LabelSpace::make_default();
  auto parsed = io::parsed_document_from_json(j);
  auto doc = io::extract_document(parsed, labels, {});
  REQUIRE(doc.sources.size() == 1);
  CHECK(doc.sources[0].canonical_name == "David R. Obey");
  CHECK(doc.sources[0].clamped);
  CHECK(doc.sources[0].gold_label->index == 0);
  CHECK(doc.tokens[5].is_stopword);  // "a"
  CHECK(doc.timestamp->iso() == "1994-02-03");
  CHECK(std::all_of(doc.gamma.begin(), doc.gamma.end(), [](int g) { return g == 0; }));

  j["gold_sources"] = io::Json::object();
  j["heldout_sources"] = {{"0", "academic-expert"}};
  doc = io::extract_document(io::parsed_document_from_json(j), labels, {});
  CHECK_FALSE(doc.sources[0].clamped);
  CHECK(doc.sources[0].gold_label->affiliation == Affiliation::Academic);
}
