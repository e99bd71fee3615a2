#include "stm/model.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "stm/error.hpp"

namespace stm {

namespace {

template <typename A, typename B>
bool same(const Eigen::DenseBase<A>& a, const Eigen::DenseBase<B>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.derived().array() == b.derived().array()).all();
}

double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

int uniform_index(Rng& rng, int n) { return std::min(static_cast<int>(uniform01(rng) * n), n - 1); }

/// log Dirichlet-multinomial probability of one ordered sequence with counts `n`.
template <typename Counts, typename Prior>
double log_dirichlet_multinomial(const Eigen::DenseBase<Counts>& n, const Eigen::DenseBase<Prior>& prior) {
  double out = 0.0, prior_sum = 0.0, total = 0.0;
  for (Eigen::Index i = 0; i < n.size(); ++i) {
    const double a = prior(i), c = n(i);
    prior_sum += a;
    total += c;
    if (c > 0) out += log_gamma(a + c) - log_gamma(a);
  }
  if (total > 0) out += log_gamma(prior_sum) - log_gamma(prior_sum + total);
  return out;
}

/// log of prod_i (prior_i + base_i)^m_i / (base_total + sum prior)^M under AsPrinted, or
/// of the matching ratio of ascending factorials under Exact.
double log_block_factor(BlockRule rule, const Eigen::Ref<const Eigen::VectorXi>& multiplicity,
                        const Eigen::VectorXd& prior, double prior_sum, const std::int32_t* base, double base_total,
                        int block_size) {
  if (block_size == 0) return 0.0;
  double out = 0.0;
  if (rule == BlockRule::AsPrinted) {
    for (Eigen::Index i = 0; i < multiplicity.size(); ++i)
      if (const int m = multiplicity(i); m > 0) out += m * std::log(prior(i) + base[i]);
    out -= block_size * std::log(base_total + prior_sum);
  } else {
    for (Eigen::Index i = 0; i < multiplicity.size(); ++i)
      if (const int m = multiplicity(i); m > 0) {
        const double a = prior(i) + base[i];
        out += log_gamma(a + m) - log_gamma(a);
      }
    out -= log_gamma(base_total + prior_sum + block_size) - log_gamma(base_total + prior_sum);
  }
  return out;
}

void check_normalized(const Eigen::VectorXd& p) {
  if (!p.allFinite() || std::abs(p.sum() - 1.0) > 1e-12)
    throw ConsistencyError("conditional failed to normalize (sum " + std::to_string(p.sum()) + ")");
}

// Contribution updates. `delta` is +1 or -1.

void update_doc(ModelState& st, const TrainingData& data, int d, int delta) {
  auto& c = st.counts;
  const auto& doc = data.docs[static_cast<std::size_t>(d)];
  const int t = st.latent.doc_type(d);
  c.n_doc_type(t) += delta;
  for (int n = 0; n < doc.num_sources; ++n) {
    c.n_src_by_doc(t, st.latent.source_type(doc.source_offset + n)) += delta;
    c.n_src_total_by_doc(t) += delta;
  }
  const auto& z = st.latent.word_topic[static_cast<std::size_t>(d)];
  for (int j : doc.background_tokens) c.n_topic_by_doc(z(j), t) += delta;
  c.n_bg_total_by_doc(t) += delta * static_cast<int>(doc.background_tokens.size());
}

void update_source(ModelState& st, const TrainingData& data, int d, int n, int delta) {
  auto& c = st.counts;
  const auto& doc = data.docs[static_cast<std::size_t>(d)];
  const int t = st.latent.doc_type(d);
  const int s = st.latent.source_type(doc.source_offset + n);
  c.n_src_by_doc(t, s) += delta;
  c.n_src_total_by_doc(t) += delta;
  const auto& z = st.latent.word_topic[static_cast<std::size_t>(d)];
  const auto& tokens = doc.source_tokens[static_cast<std::size_t>(n)];
  for (int j : tokens) c.n_topic_by_src(z(j), s) += delta;
  c.n_srcword_total(s) += delta * static_cast<int>(tokens.size());
}

void update_token(ModelState& st, const TrainingData& data, int d, int j, int delta) {
  auto& c = st.counts;
  const auto& doc = data.docs[static_cast<std::size_t>(d)];
  const int k = st.latent.word_topic[static_cast<std::size_t>(d)](j);
  c.n_word_by_topic(doc.words(j), k) += delta;
  c.n_topic_total(k) += delta;
  const int g = doc.gamma(j);
  if (g == kBackground) {
    const int t = st.latent.doc_type(d);
    c.n_topic_by_doc(k, t) += delta;
    c.n_bg_total_by_doc(t) += delta;
  } else {
    const int s = st.latent.source_type(doc.source_offset + g);
    c.n_topic_by_src(k, s) += delta;
    c.n_srcword_total(s) += delta;
  }
}

// Log weights, computed with the variable's own contributions already removed.

Eigen::VectorXd doc_type_log_weights(const ModelState& st, const TrainingData& data, int d) {
  const auto& h = st.hyper;
  const auto& c = st.counts;
  const auto& doc = data.docs[static_cast<std::size_t>(d)];
  const int T = h.num_doc_types(), S = h.num_source_types(), K = h.num_topics();

  Eigen::VectorXi src_mult = Eigen::VectorXi::Zero(S);
  for (int n = 0; n < doc.num_sources; ++n) ++src_mult(st.latent.source_type(doc.source_offset + n));
  Eigen::VectorXi bg_mult = Eigen::VectorXi::Zero(K);
  const auto& z = st.latent.word_topic[static_cast<std::size_t>(d)];
  for (int j : doc.background_tokens) ++bg_mult(z(j));
  const int num_bg = static_cast<int>(doc.background_tokens.size());
  const double hs_sum = h.source_type_prior.sum(), hz_sum = h.topic_prior.sum();

  // n_src_by_doc is T x S column-major; gather one row into contiguous storage.
  Eigen::Matrix<std::int32_t, Eigen::Dynamic, 1> row(S);
  Eigen::VectorXd lw(T);
  for (int t = 0; t < T; ++t) {
    row = c.n_src_by_doc.row(t).transpose();
    lw(t) = std::log(h.doc_type_prior(t) + c.n_doc_type(t)) +
            log_block_factor(st.rule, src_mult, h.source_type_prior, hs_sum, row.data(), c.n_src_total_by_doc(t),
                             doc.num_sources) +
            log_block_factor(st.rule, bg_mult, h.topic_prior, hz_sum, c.n_topic_by_doc.col(t).data(),
                             c.n_bg_total_by_doc(t), num_bg);
  }
  return lw;
}

Eigen::VectorXd source_type_log_weights(const ModelState& st, const TrainingData& data, int d, int n) {
  const auto& h = st.hyper;
  const auto& c = st.counts;
  const auto& doc = data.docs[static_cast<std::size_t>(d)];
  const int S = h.num_source_types(), K = h.num_topics();
  const int t = st.latent.doc_type(d);

  const auto& tokens = doc.source_tokens[static_cast<std::size_t>(n)];
  Eigen::VectorXi mult = Eigen::VectorXi::Zero(K);
  const auto& z = st.latent.word_topic[static_cast<std::size_t>(d)];
  for (int j : tokens) ++mult(z(j));
  const double hz_sum = h.topic_prior.sum();

  Eigen::VectorXd lw(S);
  for (int s = 0; s < S; ++s)
    lw(s) = std::log(h.source_type_prior(s) + c.n_src_by_doc(t, s)) +
            log_block_factor(st.rule, mult, h.topic_prior, hz_sum, c.n_topic_by_src.col(s).data(),
                             c.n_srcword_total(s), static_cast<int>(tokens.size()));
  return lw;
}

/// Unnormalized topic weights into `out`; returns their sum.
double word_topic_weights(const ModelState& st, const TrainingData& data, int d, int j, Eigen::VectorXd& out) {
  const auto& h = st.hyper;
  const auto& c = st.counts;
  const auto& doc = data.docs[static_cast<std::size_t>(d)];
  const int K = h.num_topics();
  const int g = doc.gamma(j);
  const std::int32_t* context = g == kBackground
                                    ? c.n_topic_by_doc.col(st.latent.doc_type(d)).data()
                                    : c.n_topic_by_src.col(st.latent.source_type(doc.source_offset + g)).data();
  const std::int32_t* word = c.n_word_by_topic.row(doc.words(j)).data();
  const double hw = h.word_prior;
  const double vhw = data.vocab_size * hw;
  if (out.size() < K) out.resize(K);
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    const double wgt = (context[k] + h.topic_prior(k)) * (word[k] + hw) / (c.n_topic_total(k) + vhw);
    out(k) = wgt;
    total += wgt;
  }
  return total;
}

bool is_clamped(const ModelState& st, const TrainingData& data, int d, int n) {
  return st.latent.clamped[static_cast<std::size_t>(data.docs[static_cast<std::size_t>(d)].source_offset + n)];
}

void check_doc(const TrainingData& data, int d) {
  if (d < 0 || d >= data.num_docs()) throw ValidationError("document index " + std::to_string(d) + " out of range");
}

}  // namespace

Hyperparameters Hyperparameters::symmetric(int doc_types, int source_types, int topics, double h_t, double h_s,
                                           double h_z, double h_w) {
  if (doc_types < 1 || source_types < 1 || topics < 1)
    throw ValidationError("numbers of document-types, source-types and topics must be >= 1");
  Hyperparameters h;
  h.doc_type_prior = Eigen::VectorXd::Constant(doc_types, h_t);
  h.source_type_prior = Eigen::VectorXd::Constant(source_types, h_s);
  h.topic_prior = Eigen::VectorXd::Constant(topics, h_z);
  h.word_prior = h_w;
  h.validate();
  return h;
}

void Hyperparameters::validate() const {
  if (num_doc_types() < 1 || num_source_types() < 1 || num_topics() < 1)
    throw ValidationError("numbers of document-types, source-types and topics must be >= 1");
  auto positive = [](const Eigen::VectorXd& v) { return v.allFinite() && (v.array() > 0).all(); };
  if (!positive(doc_type_prior)) throw ValidationError("doc_type_prior must be strictly positive");
  if (!positive(source_type_prior)) throw ValidationError("source_type_prior must be strictly positive");
  if (!positive(topic_prior)) throw ValidationError("topic_prior must be strictly positive");
  if (!(word_prior > 0) || !std::isfinite(word_prior)) throw ValidationError("word_prior must be strictly positive");
}

bool operator==(const Hyperparameters& a, const Hyperparameters& b) {
  return same(a.doc_type_prior, b.doc_type_prior) && same(a.source_type_prior, b.source_type_prior) &&
         same(a.topic_prior, b.topic_prior) && a.word_prior == b.word_prior;
}

std::size_t TrainingData::num_tokens() const {
  std::size_t n = 0;
  for (const auto& d : docs) n += static_cast<std::size_t>(d.words.size());
  return n;
}

namespace {

void index_tokens(DocumentData& doc) {
  doc.source_tokens.assign(static_cast<std::size_t>(doc.num_sources), {});
  doc.background_tokens.clear();
  for (Eigen::Index j = 0; j < doc.gamma.size(); ++j) {
    const int g = doc.gamma(j);
    if (g == kBackground)
      doc.background_tokens.push_back(static_cast<int>(j));
    else
      doc.source_tokens[static_cast<std::size_t>(g)].push_back(static_cast<int>(j));
  }
}

}  // namespace

TrainingData TrainingData::from_corpus(const Corpus& corpus) {
  TrainingData data;
  data.vocab_size = corpus.vocabulary.size();
  if (data.vocab_size == 0) throw ValidationError("corpus has an empty vocabulary");
  for (const auto& doc : corpus.documents) {
    doc.validate();
    DocumentData dd;
    std::vector<int> words, gamma;
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      if (doc.tokens[i].is_stopword) continue;
      const int id = corpus.vocabulary.id(doc.tokens[i].lemma);
      if (id < 0) continue;
      words.push_back(id);
      gamma.push_back(doc.gamma[i]);
    }
    dd.words = Eigen::Map<Eigen::VectorXi>(words.data(), static_cast<Eigen::Index>(words.size()));
    dd.gamma = Eigen::Map<Eigen::VectorXi>(gamma.data(), static_cast<Eigen::Index>(gamma.size()));
    dd.num_sources = static_cast<int>(doc.sources.size());
    dd.source_offset = data.num_sources;
    data.num_sources += dd.num_sources;
    for (const auto& s : doc.sources) {
      if (s.clamped) {
        auto cell = corpus.label_space.find(s.gold_label->affiliation, s.gold_label->role);
        if (!cell)
          throw ValidationError("document '" + doc.doc_id + "': clamp label outside the label space");
        data.clamp_label.push_back(cell->index);
      } else {
        data.clamp_label.push_back(-1);
      }
    }
    index_tokens(dd);
    data.docs.push_back(std::move(dd));
  }
  return data;
}

TrainingData TrainingData::from_arrays(int vocab_size, const std::vector<std::vector<int>>& words,
                                       const std::vector<std::vector<int>>& gamma, const std::vector<int>& sources,
                                       const std::vector<int>& clamp_label) {
  if (words.size() != gamma.size() || words.size() != sources.size())
    throw ValidationError("words, gamma and sources must describe the same documents");
  TrainingData data;
  data.vocab_size = vocab_size;
  for (std::size_t d = 0; d < words.size(); ++d) {
    if (words[d].size() != gamma[d].size()) throw ValidationError("gamma length differs from word count");
    DocumentData dd;
    dd.words.resize(static_cast<Eigen::Index>(words[d].size()));
    dd.gamma.resize(static_cast<Eigen::Index>(words[d].size()));
    for (std::size_t j = 0; j < words[d].size(); ++j) {
      if (words[d][j] < 0 || words[d][j] >= vocab_size) throw ValidationError("word id out of range");
      if (gamma[d][j] != kBackground && (gamma[d][j] < 0 || gamma[d][j] >= sources[d]))
        throw ValidationError("gamma names no source");
      dd.words(static_cast<Eigen::Index>(j)) = words[d][j];
      dd.gamma(static_cast<Eigen::Index>(j)) = gamma[d][j];
    }
    dd.num_sources = sources[d];
    dd.source_offset = data.num_sources;
    data.num_sources += sources[d];
    index_tokens(dd);
    data.docs.push_back(std::move(dd));
  }
  data.clamp_label = clamp_label.empty() ? std::vector<int>(static_cast<std::size_t>(data.num_sources), -1) : clamp_label;
  if (static_cast<int>(data.clamp_label.size()) != data.num_sources)
    throw ValidationError("clamp labels must cover every source");
  return data;
}

std::uint32_t TrainingData::fingerprint() const {
  uLong crc = crc32(0L, Z_NULL, 0);
  auto feed = [&](const void* p, std::size_t n) { crc = crc32(crc, static_cast<const Bytef*>(p), static_cast<uInt>(n)); };
  feed(&vocab_size, sizeof vocab_size);
  for (const auto& d : docs) {
    feed(&d.num_sources, sizeof d.num_sources);
    const auto n = static_cast<std::size_t>(d.words.size());
    feed(&n, sizeof n);
    feed(d.words.data(), n * sizeof(int));
    feed(d.gamma.data(), n * sizeof(int));
  }
  feed(clamp_label.data(), clamp_label.size() * sizeof(int));
  return static_cast<std::uint32_t>(crc);
}

bool operator==(const LatentState& a, const LatentState& b) {
  if (!same(a.doc_type, b.doc_type) || !same(a.source_type, b.source_type) || a.clamped != b.clamped ||
      a.word_topic.size() != b.word_topic.size())
    return false;
  for (std::size_t d = 0; d < a.word_topic.size(); ++d)
    if (!same(a.word_topic[d], b.word_topic[d])) return false;
  return true;
}

CountTables CountTables::zeros(int T, int S, int K, int V) {
  CountTables c;
  c.n_doc_type = CountVector::Zero(T);
  c.n_src_by_doc = CountMatrix::Zero(T, S);
  c.n_topic_by_doc = CountMatrix::Zero(K, T);
  c.n_topic_by_src = CountMatrix::Zero(K, S);
  c.n_word_by_topic = CountMatrixRowMajor::Zero(V, K);
  c.n_topic_total = CountVector::Zero(K);
  c.n_src_total_by_doc = CountVector::Zero(T);
  c.n_bg_total_by_doc = CountVector::Zero(T);
  c.n_srcword_total = CountVector::Zero(S);
  return c;
}

bool CountTables::all_non_negative() const {
  return (n_doc_type.array() >= 0).all() && (n_src_by_doc.array() >= 0).all() &&
         (n_topic_by_doc.array() >= 0).all() && (n_topic_by_src.array() >= 0).all() &&
         (n_word_by_topic.array() >= 0).all() && (n_topic_total.array() >= 0).all() &&
         (n_src_total_by_doc.array() >= 0).all() && (n_bg_total_by_doc.array() >= 0).all() &&
         (n_srcword_total.array() >= 0).all();
}

bool operator==(const CountTables& a, const CountTables& b) {
  return same(a.n_doc_type, b.n_doc_type) && same(a.n_src_by_doc, b.n_src_by_doc) &&
         same(a.n_topic_by_doc, b.n_topic_by_doc) && same(a.n_topic_by_src, b.n_topic_by_src) &&
         same(a.n_word_by_topic, b.n_word_by_topic) && same(a.n_topic_total, b.n_topic_total) &&
         same(a.n_src_total_by_doc, b.n_src_total_by_doc) && same(a.n_bg_total_by_doc, b.n_bg_total_by_doc) &&
         same(a.n_srcword_total, b.n_srcword_total);
}

bool operator==(const PosteriorTally& a, const PosteriorTally& b) {
  return a.samples == b.samples && same(a.doc_type_hits, b.doc_type_hits) &&
         same(a.source_type_hits, b.source_type_hits);
}

bool operator==(const ModelState& a, const ModelState& b) {
  return a.hyper == b.hyper && a.rule == b.rule && a.latent == b.latent && a.counts == b.counts && a.rng == b.rng &&
         a.rng_seed == b.rng_seed && a.sweep == b.sweep && a.tally == b.tally && a.trace == b.trace;
}

ModelState init_state(const TrainingData& data, const Hyperparameters& hyper, std::uint64_t seed, BlockRule rule) {
  hyper.validate();
  if (data.docs.empty()) throw ValidationError("cannot initialize a model on an empty corpus");
  const int T = hyper.num_doc_types(), S = hyper.num_source_types(), K = hyper.num_topics();
  for (int label : data.clamp_label)
    if (label >= S)
      throw ValidationError("clamp label index " + std::to_string(label) + " is out of range for " +
                            std::to_string(S) + " source-types");

  ModelState st;
  st.hyper = hyper;
  st.rule = rule;
  st.rng.seed(seed);
  st.rng_seed = seed;
  auto& lat = st.latent;
  lat.doc_type.resize(data.num_docs());
  lat.source_type.resize(data.num_sources);
  lat.clamped.assign(static_cast<std::size_t>(data.num_sources), false);
  lat.word_topic.resize(data.docs.size());
  for (int d = 0; d < data.num_docs(); ++d) {
    const auto& doc = data.docs[static_cast<std::size_t>(d)];
    lat.doc_type(d) = uniform_index(st.rng, T);
    for (int n = 0; n < doc.num_sources; ++n) {
      const int g = doc.source_offset + n;
      const int label = data.clamp_label[static_cast<std::size_t>(g)];
      lat.clamped[static_cast<std::size_t>(g)] = label >= 0;
      lat.source_type(g) = label >= 0 ? label : uniform_index(st.rng, S);
    }
    auto& z = lat.word_topic[static_cast<std::size_t>(d)];
    z.resize(doc.words.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = uniform_index(st.rng, K);
  }
  st.counts = rebuild_counts(lat, data, hyper);
  st.tally.doc_type_hits = Eigen::MatrixXi::Zero(data.num_docs(), T);
  st.tally.source_type_hits = Eigen::MatrixXi::Zero(data.num_sources, S);
  st.scratch.resize(std::max({T, S, K}));
  return st;
}

CountTables rebuild_counts(const LatentState& lat, const TrainingData& data, const Hyperparameters& hyper) {
  const int T = hyper.num_doc_types(), S = hyper.num_source_types(), K = hyper.num_topics();
  if (lat.doc_type.size() != data.num_docs() || lat.source_type.size() != data.num_sources ||
      lat.word_topic.size() != data.docs.size())
    throw ValidationError("latent state shape does not match the corpus");
  auto c = CountTables::zeros(T, S, K, data.vocab_size);
  for (int d = 0; d < data.num_docs(); ++d) {
    const auto& doc = data.docs[static_cast<std::size_t>(d)];
    const auto& z = lat.word_topic[static_cast<std::size_t>(d)];
    if (z.size() != doc.words.size()) throw ValidationError("latent state shape does not match the corpus");
    const int t = lat.doc_type(d);
    if (t < 0 || t >= T) throw ValidationError("document-type out of range");
    ++c.n_doc_type(t);
    for (int n = 0; n < doc.num_sources; ++n) {
      const int s = lat.source_type(doc.source_offset + n);
      if (s < 0 || s >= S) throw ValidationError("source-type out of range");
      ++c.n_src_by_doc(t, s);
      ++c.n_src_total_by_doc(t);
    }
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      const int k = z(j);
      if (k < 0 || k >= K) throw ValidationError("word-topic out of range");
      ++c.n_word_by_topic(doc.words(j), k);
      ++c.n_topic_total(k);
      if (doc.gamma(j) == kBackground) {
        ++c.n_topic_by_doc(k, t);
        ++c.n_bg_total_by_doc(t);
      } else {
        const int s = lat.source_type(doc.source_offset + doc.gamma(j));
        ++c.n_topic_by_src(k, s);
        ++c.n_srcword_total(s);
      }
    }
  }
  return c;
}

Eigen::VectorXd doc_type_conditional(ModelState& st, const TrainingData& data, int d) {
  check_doc(data, d);
  update_doc(st, data, d, -1);
  Eigen::VectorXd p = normalize_log_weights(doc_type_log_weights(st, data, d));
  update_doc(st, data, d, +1);
  check_normalized(p);
  return p;
}

Eigen::VectorXd source_type_conditional(ModelState& st, const TrainingData& data, int d, int n) {
  check_doc(data, d);
  update_source(st, data, d, n, -1);
  Eigen::VectorXd p = normalize_log_weights(source_type_log_weights(st, data, d, n));
  update_source(st, data, d, n, +1);
  check_normalized(p);
  return p;
}

Eigen::VectorXd word_topic_conditional(ModelState& st, const TrainingData& data, int d, int j) {
  check_doc(data, d);
  update_token(st, data, d, j, -1);
  Eigen::VectorXd w(st.hyper.num_topics());
  const double total = word_topic_weights(st, data, d, j, w);
  update_token(st, data, d, j, +1);
  Eigen::VectorXd p = w / total;
  check_normalized(p);
  return p;
}

void sample_doc_type(ModelState& st, const TrainingData& data, int d) {
  update_doc(st, data, d, -1);
  const Eigen::VectorXd p = normalize_log_weights(doc_type_log_weights(st, data, d));
  st.latent.doc_type(d) = static_cast<int>(sample_weighted(p, p.sum(), st.rng));
  update_doc(st, data, d, +1);
}

void sample_source_type(ModelState& st, const TrainingData& data, int d, int n) {
  if (is_clamped(st, data, d, n)) return;
  update_source(st, data, d, n, -1);
  const Eigen::VectorXd p = normalize_log_weights(source_type_log_weights(st, data, d, n));
  st.latent.source_type(data.docs[static_cast<std::size_t>(d)].source_offset + n) =
      static_cast<int>(sample_weighted(p, p.sum(), st.rng));
  update_source(st, data, d, n, +1);
}

void sample_word_topic(ModelState& st, const TrainingData& data, int d, int j) {
  update_token(st, data, d, j, -1);
  const double total = word_topic_weights(st, data, d, j, st.scratch);
  st.latent.word_topic[static_cast<std::size_t>(d)](j) =
      static_cast<int>(sample_weighted(st.scratch.head(st.hyper.num_topics()), total, st.rng));
  update_token(st, data, d, j, +1);
}

void sweep(ModelState& st, const TrainingData& data) {
  const int D = data.num_docs();
  for (int d = 0; d < D; ++d) sample_doc_type(st, data, d);
  for (int d = 0; d < D; ++d)
    for (int n = 0; n < data.docs[static_cast<std::size_t>(d)].num_sources; ++n) sample_source_type(st, data, d, n);
  for (int d = 0; d < D; ++d) {
    const auto len = static_cast<int>(data.docs[static_cast<std::size_t>(d)].words.size());
    for (int j = 0; j < len; ++j) sample_word_topic(st, data, d, j);
  }
  ++st.sweep;
}

double log_joint(const CountTables& c, const Hyperparameters& h) {
  double out = log_dirichlet_multinomial(c.n_doc_type, h.doc_type_prior);
  for (Eigen::Index t = 0; t < c.n_src_by_doc.rows(); ++t)
    out += log_dirichlet_multinomial(c.n_src_by_doc.row(t).transpose(), h.source_type_prior);
  for (Eigen::Index t = 0; t < c.n_topic_by_doc.cols(); ++t)
    out += log_dirichlet_multinomial(c.n_topic_by_doc.col(t), h.topic_prior);
  for (Eigen::Index s = 0; s < c.n_topic_by_src.cols(); ++s)
    out += log_dirichlet_multinomial(c.n_topic_by_src.col(s), h.topic_prior);
  const Eigen::VectorXd word_prior = Eigen::VectorXd::Constant(c.n_word_by_topic.rows(), h.word_prior);
  for (Eigen::Index k = 0; k < c.n_word_by_topic.cols(); ++k)
    out += log_dirichlet_multinomial(c.n_word_by_topic.col(k), word_prior);
  return out;
}

Eigen::VectorXi doc_type_modes(const ModelState& st) {
  if (st.tally.samples == 0) return st.latent.doc_type;
  Eigen::VectorXi out(st.tally.doc_type_hits.rows());
  for (Eigen::Index d = 0; d < out.size(); ++d) st.tally.doc_type_hits.row(d).maxCoeff(&out(d));
  return out;
}

Eigen::VectorXi source_type_modes(const ModelState& st) {
  if (st.tally.samples == 0) return st.latent.source_type;
  Eigen::VectorXi out(st.tally.source_type_hits.rows());
  for (Eigen::Index g = 0; g < out.size(); ++g) {
    if (st.latent.clamped[static_cast<std::size_t>(g)])
      out(g) = st.latent.source_type(g);
    else
      st.tally.source_type_hits.row(g).maxCoeff(&out(g));
  }
  return out;
}

}  // namespace stm
