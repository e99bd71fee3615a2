#include "stm/snapshot.hpp"

#include <zlib.h>

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "stm/detail/strings.hpp"
#include "stm/error.hpp"
#include "stm/io.hpp"

namespace stm {

using Json = nlohmann::json;

namespace {

template <typename M>
Json matrix_to_json(const M& m) {
  std::vector<long long> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) flat.push_back(static_cast<long long>(m(i, j)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(flat)}};
}

template <typename M>
M matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>(), cols = j.at("cols").get<Eigen::Index>();
  const auto flat = j.at("data").get<std::vector<long long>>();
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != flat.size())
    throw ValidationError("snapshot matrix has inconsistent shape");
  M m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index jj = 0; jj < cols; ++jj) m(i, jj) = static_cast<typename M::Scalar>(flat[k++]);
  return m;
}

template <typename V>
Json vector_to_json(const V& v) {
  return std::vector<typename V::Scalar>(v.data(), v.data() + v.size());
}

template <typename V>
V vector_from_json(const Json& j) {
  auto raw = j.get<std::vector<typename V::Scalar>>();
  return Eigen::Map<V>(raw.data(), static_cast<Eigen::Index>(raw.size()));
}

std::uint32_t crc_of(const std::string& s) {
  return static_cast<std::uint32_t>(
      crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size())));
}

Json state_to_json(const ModelState& st) {
  Json j;
  j["hyper"] = {{"doc_type_prior", vector_to_json(st.hyper.doc_type_prior)},
                {"source_type_prior", vector_to_json(st.hyper.source_type_prior)},
                {"topic_prior", vector_to_json(st.hyper.topic_prior)},
                {"word_prior", st.hyper.word_prior}};
  j["rule"] = st.rule == BlockRule::Exact ? "exact" : "as-printed";
  Json z = Json::array();
  for (const auto& w : st.latent.word_topic) z.push_back(vector_to_json(w));
  j["latent"] = {{"doc_type", vector_to_json(st.latent.doc_type)},
                 {"source_type", vector_to_json(st.latent.source_type)},
                 {"word_topic", std::move(z)},
                 {"clamped", std::vector<bool>(st.latent.clamped)}};
  const auto& c = st.counts;
  j["counts"] = {{"n_doc_type", vector_to_json(c.n_doc_type)},
                 {"n_src_by_doc", matrix_to_json(c.n_src_by_doc)},
                 {"n_topic_by_doc", matrix_to_json(c.n_topic_by_doc)},
                 {"n_topic_by_src", matrix_to_json(c.n_topic_by_src)},
                 {"n_word_by_topic", matrix_to_json(c.n_word_by_topic)},
                 {"n_topic_total", vector_to_json(c.n_topic_total)},
                 {"n_src_total_by_doc", vector_to_json(c.n_src_total_by_doc)},
                 {"n_bg_total_by_doc", vector_to_json(c.n_bg_total_by_doc)},
                 {"n_srcword_total", vector_to_json(c.n_srcword_total)}};
  std::ostringstream rng;
  rng << st.rng;
  j["rng"] = rng.str();
  j["rng_seed"] = st.rng_seed;
  j["sweep"] = st.sweep;
  j["tally"] = {{"samples", st.tally.samples},
                {"doc_type_hits", matrix_to_json(st.tally.doc_type_hits)},
                {"source_type_hits", matrix_to_json(st.tally.source_type_hits)}};
  j["trace"] = st.trace;
  return j;
}

ModelState state_from_json(const Json& j) {
  ModelState st;
  const auto& h = j.at("hyper");
  st.hyper.doc_type_prior = vector_from_json<Eigen::VectorXd>(h.at("doc_type_prior"));
  st.hyper.source_type_prior = vector_from_json<Eigen::VectorXd>(h.at("source_type_prior"));
  st.hyper.topic_prior = vector_from_json<Eigen::VectorXd>(h.at("topic_prior"));
  st.hyper.word_prior = h.at("word_prior").get<double>();
  st.hyper.validate();
  st.rule = j.at("rule").get<std::string>() == "exact" ? BlockRule::Exact : BlockRule::AsPrinted;
  const auto& l = j.at("latent");
  st.latent.doc_type = vector_from_json<Eigen::VectorXi>(l.at("doc_type"));
  st.latent.source_type = vector_from_json<Eigen::VectorXi>(l.at("source_type"));
  for (const auto& z : l.at("word_topic")) st.latent.word_topic.push_back(vector_from_json<Eigen::VectorXi>(z));
  st.latent.clamped = l.at("clamped").get<std::vector<bool>>();
  const auto& c = j.at("counts");
  st.counts.n_doc_type = vector_from_json<CountVector>(c.at("n_doc_type"));
  st.counts.n_src_by_doc = matrix_from_json<CountMatrix>(c.at("n_src_by_doc"));
  st.counts.n_topic_by_doc = matrix_from_json<CountMatrix>(c.at("n_topic_by_doc"));
  st.counts.n_topic_by_src = matrix_from_json<CountMatrix>(c.at("n_topic_by_src"));
  st.counts.n_word_by_topic = matrix_from_json<CountMatrixRowMajor>(c.at("n_word_by_topic"));
  st.counts.n_topic_total = vector_from_json<CountVector>(c.at("n_topic_total"));
  st.counts.n_src_total_by_doc = vector_from_json<CountVector>(c.at("n_src_total_by_doc"));
  st.counts.n_bg_total_by_doc = vector_from_json<CountVector>(c.at("n_bg_total_by_doc"));
  st.counts.n_srcword_total = vector_from_json<CountVector>(c.at("n_srcword_total"));
  std::istringstream rng(j.at("rng").get<std::string>());
  rng >> st.rng;
  if (!rng) throw ValidationError("snapshot has an unreadable generator state");
  st.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  st.sweep = j.at("sweep").get<int>();
  const auto& t = j.at("tally");
  st.tally.samples = t.at("samples").get<int>();
  st.tally.doc_type_hits = matrix_from_json<Eigen::MatrixXi>(t.at("doc_type_hits"));
  st.tally.source_type_hits = matrix_from_json<Eigen::MatrixXi>(t.at("source_type_hits"));
  st.trace = j.at("trace").get<std::vector<double>>();
  const int T = st.hyper.num_doc_types(), S = st.hyper.num_source_types(), K = st.hyper.num_topics();
  st.scratch.resize(std::max({T, S, K}));
  return st;
}

}  // namespace

bool operator==(const Snapshot& a, const Snapshot& b) {
  return a.state == b.state && a.labels == b.labels && a.vocabulary == b.vocabulary && a.doc_ids == b.doc_ids &&
         a.sources_per_doc == b.sources_per_doc && a.data_fingerprint == b.data_fingerprint;
}

std::string encode_snapshot(const Snapshot& snap) {
  Json j;
  j["format"] = "source-topic-model snapshot";
  j["state"] = state_to_json(snap.state);
  j["labels"] = snap.labels.labels();
  j["vocabulary"] = snap.vocabulary.terms();
  j["vocabulary_hash"] = snap.vocabulary.hash();
  j["doc_ids"] = snap.doc_ids;
  j["sources_per_doc"] = snap.sources_per_doc;
  j["data_fingerprint"] = snap.data_fingerprint;
  const std::string body = j.dump();
  char header[64];
  std::snprintf(header, sizeof header, "STMSNAP %d %08x %zu\n", kSnapshotVersion, crc_of(body), body.size());
  return header + body;
}

Snapshot decode_snapshot(const std::string& bytes) {
  const auto eol = bytes.find('\n');
  if (eol == std::string::npos || bytes.compare(0, 8, "STMSNAP ") != 0)
    throw ValidationError("not a model snapshot (bad header)");
  int version = 0;
  unsigned crc = 0;
  std::size_t length = 0;
  if (std::sscanf(bytes.substr(0, eol).c_str(), "STMSNAP %d %x %zu", &version, &crc, &length) != 3)
    throw ValidationError("not a model snapshot (bad header)");
  if (version != kSnapshotVersion)
    throw ValidationError("snapshot version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(kSnapshotVersion) + ")");
  const std::string body = bytes.substr(eol + 1);
  if (body.size() != length) throw ValidationError("snapshot is truncated or padded (length mismatch)");
  if (crc_of(body) != crc) throw ValidationError("snapshot checksum mismatch (file is corrupted)");

  Json j;
  try {
    j = Json::parse(body);
    Snapshot snap;
    snap.state = state_from_json(j.at("state"));
    snap.labels = LabelSpace::from_labels(j.at("labels").get<std::vector<std::string>>());
    snap.vocabulary = Vocabulary(j.at("vocabulary").get<std::vector<std::string>>());
    if (snap.vocabulary.hash() != j.at("vocabulary_hash").get<std::uint32_t>())
      throw ValidationError("snapshot vocabulary hash mismatch");
    snap.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
    snap.sources_per_doc = j.at("sources_per_doc").get<std::vector<int>>();
    snap.data_fingerprint = j.at("data_fingerprint").get<std::uint32_t>();
    return snap;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed snapshot body: ") + e.what());
  }
}

void save_snapshot(const Snapshot& snapshot, const std::string& path) {
  io::write_text(path, encode_snapshot(snapshot));
}

Snapshot load_snapshot(const std::string& path) { return decode_snapshot(detail::read_file(path)); }

void save_state(const ModelState& state, const std::string& path) {
  Snapshot snap;
  snap.state = state;
  save_snapshot(snap, path);
}

ModelState load_state(const std::string& path) { return load_snapshot(path).state; }

}  // namespace stm
