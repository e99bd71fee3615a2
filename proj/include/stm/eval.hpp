#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stm/ontology.hpp"

namespace stm::eval {

/// Maps every cluster index present in `assignments` to the label maximizing add-one
/// smoothed PMI against `gold` (labels in [0, num_labels), std::nullopt = unlabeled).
/// Ties go to the label with the larger joint count, then to the lower label index.
std::map<int, int> pmi_align(const std::vector<int>& assignments, const std::vector<std::optional<int>>& gold,
                             int num_labels);

struct AccuracyReport {
  std::size_t total = 0;
  double overall = 0.0;      // affiliation and role both match
  double affiliation = 0.0;  // affiliation matches
  double role = 0.0;         // role matches
  /// Exact-match accuracy among items whose gold label has the given affiliation / role.
  std::map<std::string, double> per_affiliation;
  std::map<std::string, double> per_role;
};

/// Scores `predicted` against `gold` on the positions listed in `subset`.
AccuracyReport accuracy(const std::vector<SourceType>& predicted, const std::vector<SourceType>& gold,
                        const std::vector<std::size_t>& subset);

/// Fraction of positions where aligned(cluster) == truth, after PMI-aligning on all of them.
double aligned_accuracy(const std::vector<int>& clusters, const std::vector<int>& truth, int num_labels);

/// rows = gold label, cols = predicted label.
Eigen::MatrixXi confusion_matrix(const std::vector<int>& predicted, const std::vector<int>& gold,
                                 const std::vector<std::size_t>& subset, int num_labels);
std::string confusion_csv(const Eigen::MatrixXi& confusion, const std::vector<std::string>& labels);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Seeded split of item positions, stratified by label: the train side gets
/// round(fraction * N) items, each label contributing floor(fraction * n_l) plus one
/// for the labels with the largest remainders.
Split train_validation_split(const std::vector<int>& labels, double fraction, std::uint64_t seed);

}  // namespace stm::eval
