#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "stm/corpus.hpp"
#include "stm/random.hpp"

namespace stm {

using CountMatrix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;
using CountMatrixRowMajor = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CountVector = Eigen::Matrix<std::int32_t, Eigen::Dynamic, 1>;

/// Dirichlet concentrations. Priors over document-types, source-types and topics are
/// vectors (symmetric by default); the word prior is a scalar.
struct Hyperparameters {
  Eigen::VectorXd doc_type_prior;     // H_T, length T
  Eigen::VectorXd source_type_prior;  // H_S, length S
  Eigen::VectorXd topic_prior;        // H_z, length K
  double word_prior = 0.01;           // H_w

  int num_doc_types() const { return static_cast<int>(doc_type_prior.size()); }
  int num_source_types() const { return static_cast<int>(source_type_prior.size()); }
  int num_topics() const { return static_cast<int>(topic_prior.size()); }

  static Hyperparameters symmetric(int doc_types, int source_types, int topics, double h_t = 1.0, double h_s = 0.1,
                                   double h_z = 0.1, double h_w = 0.01);
  void validate() const;
  friend bool operator==(const Hyperparameters& a, const Hyperparameters& b);
};

/// How the document-type and source-type conditionals treat a block's own
/// observations. AsPrinted multiplies one factor per source / word against the counts
/// with the block removed; Exact uses ascending factorials (the true blocked conditional).
enum class BlockRule { AsPrinted, Exact };

/// Observed data in the shape the sampler reads: vocabulary ids of modeled tokens plus
/// their switch values, and per-source clamp labels.
struct DocumentData {
  Eigen::VectorXi words;
  Eigen::VectorXi gamma;  // kBackground or local source index
  int num_sources = 0;
  int source_offset = 0;  // first global source index
  std::vector<std::vector<int>> source_tokens;
  std::vector<int> background_tokens;
};

struct TrainingData {
  int vocab_size = 0;
  int num_sources = 0;
  std::vector<DocumentData> docs;
  std::vector<int> clamp_label;  // per global source; -1 when free

  /// Tokens whose lemma is outside the corpus vocabulary are not modeled.
  static TrainingData from_corpus(const Corpus& corpus);
  /// `gamma[d][i]` is kBackground or a source index below `sources[d]`.
  static TrainingData from_arrays(int vocab_size, const std::vector<std::vector<int>>& words,
                                  const std::vector<std::vector<int>>& gamma, const std::vector<int>& sources,
                                  const std::vector<int>& clamp_label = {});

  int num_docs() const { return static_cast<int>(docs.size()); }
  std::size_t num_tokens() const;
  std::uint32_t fingerprint() const;
};

struct LatentState {
  Eigen::VectorXi doc_type;               // per document, in [0, T)
  Eigen::VectorXi source_type;            // per global source, in [0, S)
  std::vector<Eigen::VectorXi> word_topic;  // per document, per modeled token, in [0, K)
  std::vector<bool> clamped;              // per global source

  friend bool operator==(const LatentState& a, const LatentState& b);
};

/// Sufficient statistics. Shapes: n_src_by_doc T x S, n_topic_by_doc K x T,
/// n_topic_by_src K x S, n_word_by_topic V x K.
struct CountTables {
  CountVector n_doc_type;
  CountMatrix n_src_by_doc;
  CountMatrix n_topic_by_doc;
  CountMatrix n_topic_by_src;
  CountMatrixRowMajor n_word_by_topic;
  CountVector n_topic_total;
  CountVector n_src_total_by_doc;
  CountVector n_bg_total_by_doc;
  CountVector n_srcword_total;

  static CountTables zeros(int doc_types, int source_types, int topics, int vocab_size);
  bool all_non_negative() const;
  friend bool operator==(const CountTables& a, const CountTables& b);
};

/// Per-variable sample tallies accumulated after burn-in.
struct PosteriorTally {
  Eigen::MatrixXi doc_type_hits;     // D x T
  Eigen::MatrixXi source_type_hits;  // N_sources x S
  int samples = 0;

  friend bool operator==(const PosteriorTally& a, const PosteriorTally& b);
};

struct ModelState {
  Hyperparameters hyper;
  BlockRule rule = BlockRule::AsPrinted;
  LatentState latent;
  CountTables counts;
  Rng rng;
  std::uint64_t rng_seed = 0;
  int sweep = 0;
  PosteriorTally tally;
  std::vector<double> trace;  // log_joint after each sweep

  /// Workspace for conditionals; not part of the state's value.
  Eigen::VectorXd scratch;

  friend bool operator==(const ModelState& a, const ModelState& b);
};

ModelState init_state(const TrainingData& data, const Hyperparameters& hyper, std::uint64_t seed,
                      BlockRule rule = BlockRule::AsPrinted);

CountTables rebuild_counts(const LatentState& latent, const TrainingData& data, const Hyperparameters& hyper);

/// Normalized conditionals for one variable given all others. The state is left
/// exactly as it was.
Eigen::VectorXd doc_type_conditional(ModelState& state, const TrainingData& data, int d);
Eigen::VectorXd source_type_conditional(ModelState& state, const TrainingData& data, int d, int n);
Eigen::VectorXd word_topic_conditional(ModelState& state, const TrainingData& data, int d, int j);

void sample_doc_type(ModelState& state, const TrainingData& data, int d);
/// No-op for clamped sources.
void sample_source_type(ModelState& state, const TrainingData& data, int d, int n);
void sample_word_topic(ModelState& state, const TrainingData& data, int d, int j);

/// Document-types, then free source-types, then word-topics, in document order.
void sweep(ModelState& state, const TrainingData& data);

/// Collapsed log p(w, z, S, T | gamma, H): a product of Dirichlet-multinomial
/// marginals over every count table.
double log_joint(const CountTables& counts, const Hyperparameters& hyper);
inline double log_joint(const ModelState& state) { return log_joint(state.counts, state.hyper); }

/// Posterior modes from the tally (current assignment when nothing was tallied);
/// clamped sources report their clamp label. Ties go to the lower index.
Eigen::VectorXi doc_type_modes(const ModelState& state);
Eigen::VectorXi source_type_modes(const ModelState& state);

}  // namespace stm
