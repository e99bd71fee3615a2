#include "stm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "stm/error.hpp"
#include "stm/random.hpp"

namespace stm::synth {

namespace {

/// log of a symmetric Dirichlet draw. Small concentrations use the boost
/// G(a) = G(a + 1) * U^(1/a) so coordinates never underflow to zero.
Eigen::VectorXd log_dirichlet(int n, double alpha, Rng& rng) {
  std::gamma_distribution<double> gamma(alpha < 1.0 ? alpha + 1.0 : alpha, 1.0);
  Eigen::VectorXd lg(n);
  for (int i = 0; i < n; ++i) {
    double g = std::log(gamma(rng));
    if (alpha < 1.0) g += std::log(1.0 - uniform01(rng)) / alpha;
    lg(i) = g;
  }
  const double m = lg.maxCoeff();
  const double lse = m + std::log((lg.array() - m).exp().sum());
  return lg.array() - lse;
}

Eigen::MatrixXd log_dirichlet_rows(int rows, int cols, double alpha, Rng& rng) {
  Eigen::MatrixXd out(rows, cols);
  for (int r = 0; r < rows; ++r) out.row(r) = log_dirichlet(cols, alpha, rng).transpose();
  return out;
}

int draw(const Eigen::Ref<const Eigen::RowVectorXd>& p, Rng& rng) {
  return static_cast<int>(sample_weighted(p, p.sum(), rng));
}

}  // namespace

void SynthConfig::validate() const {
  if (doc_types < 1 || source_types < 1 || topics < 1 || vocab_size < 1)
    throw ValidationError("doc_types, source_types, topics and vocab_size must be >= 1");
  if (!(h_t > 0 && h_s > 0 && h_z > 0 && h_w > 0)) throw ValidationError("Dirichlet concentrations must be positive");
  if (!(separation >= 1.0)) throw ValidationError("separation must be >= 1");
  if (!(mean_extra_sources >= 0) || !(mean_words >= 0)) throw ValidationError("count means must be >= 0");
  if (!(source_word_fraction >= 0 && source_word_fraction <= 1))
    throw ValidationError("source_word_fraction must lie in [0, 1]");
  if (sentence_length < 1) throw ValidationError("sentence_length must be >= 1");
  if (span_months < 1) throw ValidationError("span_months must be >= 1");
  if (doc_type_proportions) {
    const auto& p = *doc_type_proportions;
    if (p.size() != doc_types)
      throw ValidationError("doc_type_proportions: expected " + std::to_string(doc_types) + " entries");
    if ((p.array() < 0).any() || std::abs(p.sum() - 1.0) > 1e-9)
      throw ValidationError("doc_type_proportions: not a probability simplex (entries must be >= 0 and sum to 1)");
  }
}

Eigen::MatrixXd sharpen(const Eigen::MatrixXd& log_probs, double separation) {
  Eigen::MatrixXd out(log_probs.rows(), log_probs.cols());
  for (Eigen::Index r = 0; r < log_probs.rows(); ++r) {
    Eigen::RowVectorXd l = log_probs.row(r) * separation;
    l.array() -= l.maxCoeff();
    Eigen::RowVectorXd p = l.array().exp();
    out.row(r) = p / p.sum();
  }
  return out;
}

TrueParameters sample_parameters(const SynthConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  const int T = cfg.doc_types, S = cfg.source_types, K = cfg.topics, V = cfg.vocab_size;
  TrueParameters p;
  // Fixed draw order: P_T, P_S, P_z (source), P_z (background), topics.
  const Eigen::MatrixXd log_t = log_dirichlet_rows(1, T, cfg.h_t, rng);
  p.doc_type = cfg.doc_type_proportions ? *cfg.doc_type_proportions
                                        : Eigen::VectorXd(sharpen(log_t, cfg.separation).row(0).transpose());
  p.source_type = sharpen(log_dirichlet_rows(T, S, cfg.h_s, rng), cfg.separation);
  p.source_topics = sharpen(log_dirichlet_rows(S, K, cfg.h_z, rng), cfg.separation);
  p.background_topics = sharpen(log_dirichlet_rows(T, K, cfg.h_z, rng), cfg.separation);
  p.topics = sharpen(log_dirichlet_rows(K, V, cfg.h_w, rng), cfg.separation);
  p.mean_extra_sources = cfg.mean_extra_sources;
  p.mean_words = cfg.mean_words;
  p.source_word_fraction = cfg.source_word_fraction;
  p.blocked_gamma = cfg.blocked_gamma;
  p.sentence_length = cfg.sentence_length;
  p.start_year = cfg.start_year;
  p.span_months = cfg.span_months;
  return p;
}

SyntheticCorpus generate_corpus(const TrueParameters& params, int num_docs, std::uint64_t seed,
                                const LabelSpace& labels) {
  if (num_docs < 1) throw ValidationError("number of documents must be >= 1");
  const int S = static_cast<int>(params.source_type.cols());
  const int V = static_cast<int>(params.topics.cols());
  if (S > labels.size())
    throw ValidationError(std::to_string(S) + " source-types exceed the label space of " + std::to_string(labels.size()));

  Rng rng(seed);
  std::poisson_distribution<int> extra_sources(params.mean_extra_sources);
  std::poisson_distribution<int> words(params.mean_words);
  const Eigen::RowVectorXd doc_type = params.doc_type.transpose();

  SyntheticCorpus out;
  std::vector<std::string> terms(static_cast<std::size_t>(V));
  for (int v = 0; v < V; ++v) terms[static_cast<std::size_t>(v)] = "w" + std::to_string(v);
  out.corpus.vocabulary = Vocabulary(terms);
  out.corpus.label_space = labels;

  std::vector<int> source_types;
  out.truth.doc_type.resize(num_docs);
  out.truth.word_topic.resize(static_cast<std::size_t>(num_docs));
  const int start_month = Date{params.start_year, 1, 1}.month_index();

  for (int d = 0; d < num_docs; ++d) {
    Document doc;
    char id[32];
    std::snprintf(id, sizeof id, "doc%06d", d);
    doc.doc_id = id;
    doc.timestamp = Date::from_month_index(start_month + static_cast<int>(static_cast<long long>(d) * params.span_months / num_docs));

    const int t = draw(doc_type, rng);
    out.truth.doc_type(d) = t;
    const int n_src = 1 + extra_sources(rng);
    std::vector<int> types(static_cast<std::size_t>(n_src));
    for (auto& s : types) s = draw(params.source_type.row(t), rng);
    source_types.insert(source_types.end(), types.begin(), types.end());

    const int n_words = words(rng);
    doc.gamma.resize(static_cast<std::size_t>(n_words));
    int block_gamma = kBackground;
    for (int j = 0; j < n_words; ++j) {
      if (!params.blocked_gamma || j % params.sentence_length == 0) {
        const bool source_word = uniform01(rng) < params.source_word_fraction;
        block_gamma = source_word ? std::min(static_cast<int>(uniform01(rng) * n_src), n_src - 1) : kBackground;
      }
      doc.gamma[static_cast<std::size_t>(j)] = block_gamma;
    }
    auto& z = out.truth.word_topic[static_cast<std::size_t>(d)];
    z.resize(n_words);
    for (int j = 0; j < n_words; ++j) {
      const int g = doc.gamma[static_cast<std::size_t>(j)];
      z(j) = g == kBackground ? draw(params.background_topics.row(t), rng)
                              : draw(params.source_topics.row(types[static_cast<std::size_t>(g)]), rng);
      const int w = draw(params.topics.row(z(j)), rng);
      Token tok;
      tok.surface = tok.lemma = terms[static_cast<std::size_t>(w)];
      tok.sentence_index = j / params.sentence_length;
      tok.position = j;
      doc.tokens.push_back(std::move(tok));
    }
    for (int n = 0; n < n_src; ++n) {
      SourceMention s;
      s.canonical_name = "source-" + std::to_string(d) + "-" + std::to_string(n);
      s.chain_id = n;
      for (int j = 0; j < n_words; ++j)
        if (doc.gamma[static_cast<std::size_t>(j)] == n) s.sentence_indices.insert(doc.tokens[static_cast<std::size_t>(j)].sentence_index);
      if (s.sentence_indices.empty()) s.sentence_indices.insert(0);
      doc.sources.push_back(std::move(s));
    }
    out.corpus.documents.push_back(std::move(doc));
  }
  out.truth.source_type = Eigen::Map<Eigen::VectorXi>(source_types.data(), static_cast<Eigen::Index>(source_types.size()));
  out.truth.clamped.assign(source_types.size(), false);
  return out;
}

Corpus clamp_fraction(const Corpus& corpus, const LatentState& truth, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ValidationError("clamp fraction must lie in [0, 1]");
  const auto n = corpus.num_sources();
  if (static_cast<std::size_t>(truth.source_type.size()) != n)
    throw ValidationError("truth does not cover every source");
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {  // partial Fisher-Yates
    const auto j = i + std::min(static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n - i)), n - i - 1);
    std::swap(order[i], order[j]);
  }
  std::vector<bool> pick(n, false);
  for (std::size_t i = 0; i < k; ++i) pick[order[i]] = true;

  Corpus out = corpus;
  std::size_t g = 0;
  for (auto& doc : out.documents)
    for (auto& s : doc.sources) {
      if (pick[g]) {
        s.gold_label = corpus.label_space[truth.source_type(static_cast<Eigen::Index>(g))];
        s.clamped = true;
      }
      ++g;
    }
  return out;
}

std::vector<io::TruthRecord> truth_records(const SyntheticCorpus& synthetic) {
  std::vector<io::TruthRecord> out;
  Eigen::Index g = 0;
  for (std::size_t d = 0; d < synthetic.corpus.documents.size(); ++d) {
    const auto& doc = synthetic.corpus.documents[d];
    io::TruthRecord r;
    r.doc_id = doc.doc_id;
    r.doc_type = synthetic.truth.doc_type(static_cast<Eigen::Index>(d));
    for (std::size_t n = 0; n < doc.sources.size(); ++n)
      r.source_types.emplace_back(synthetic.corpus.label_space[synthetic.truth.source_type(g++)]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace stm::synth
