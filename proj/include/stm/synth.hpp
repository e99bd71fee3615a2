#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "stm/corpus.hpp"
#include "stm/io.hpp"
#include "stm/model.hpp"

namespace stm::synth {

struct SynthConfig {
  int doc_types = 5;
  int source_types = 8;
  int topics = 10;
  int vocab_size = 500;
  // Dirichlet concentrations the true distributions are drawn from.
  double h_t = 1.0;
  double h_s = 0.1;
  double h_z = 0.1;
  double h_w = 0.01;
  double separation = 1.0;
  double mean_extra_sources = 3.0;  // sources per document = 1 + Poisson(mean)
  double mean_words = 200.0;        // words per document ~ Poisson(mean)
  double source_word_fraction = 0.5;
  bool blocked_gamma = false;
  int sentence_length = 20;
  int start_year = 1987;
  int span_months = 240;
  /// Fixed document-type proportions in place of a Dirichlet draw.
  std::optional<Eigen::VectorXd> doc_type_proportions;

  void validate() const;
};

/// Known generating distributions; every matrix is row-stochastic.
struct TrueParameters {
  Eigen::VectorXd doc_type;           // T
  Eigen::MatrixXd source_type;        // T x S
  Eigen::MatrixXd source_topics;      // S x K
  Eigen::MatrixXd background_topics;  // T x K
  Eigen::MatrixXd topics;             // K x V
  double mean_extra_sources = 3.0;
  double mean_words = 200.0;
  double source_word_fraction = 0.5;
  bool blocked_gamma = false;
  int sentence_length = 20;
  int start_year = 1987;
  int span_months = 240;
};

/// Rows of `log_probs` raised to `separation` and renormalized (in log space).
Eigen::MatrixXd sharpen(const Eigen::MatrixXd& log_probs, double separation);

/// Draws each distribution from its symmetric Dirichlet, then sharpens it.
TrueParameters sample_parameters(const SynthConfig& config, std::uint64_t seed);

struct SyntheticCorpus {
  Corpus corpus;
  LatentState truth;  // over every token; vocabulary ids equal word ids
};

/// Runs the generative story forward for `num_docs` documents. Source-type s is
/// named labels[s], so `labels` needs at least S members.
SyntheticCorpus generate_corpus(const TrueParameters& params, int num_docs, std::uint64_t seed,
                                const LabelSpace& labels = LabelSpace::make_default());

/// Marks round(fraction * N) uniformly chosen sources as clamped to their true label.
Corpus clamp_fraction(const Corpus& corpus, const LatentState& truth, double fraction, std::uint64_t seed);

std::vector<io::TruthRecord> truth_records(const SyntheticCorpus& synthetic);

}  // namespace stm::synth
