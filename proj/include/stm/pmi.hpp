#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <vector>

namespace stm {

/// Add-one smoothed PMI over a joint count table:
///   pmi(i, j) = log((n_ij + 1) * N') - log(r'_i * c'_j)
/// with N', r', c' the smoothed total and margins. Equal integer products give
/// bitwise-equal scores, so ties stay ties.
template <typename Derived>
Eigen::MatrixXd smoothed_pmi(const Eigen::MatrixBase<Derived>& joint) {
  const Eigen::MatrixXd n = joint.template cast<double>().array() + 1.0;
  const Eigen::VectorXd rows = n.rowwise().sum();
  const Eigen::RowVectorXd cols = n.colwise().sum();
  const double total = n.sum();
  Eigen::MatrixXd out(n.rows(), n.cols());
  for (Eigen::Index i = 0; i < n.rows(); ++i)
    for (Eigen::Index j = 0; j < n.cols(); ++j)
      out(i, j) = std::log(n(i, j) * total) - std::log(rows(i) * cols(j));
  return out;
}

/// Column indices of `scores.row(i)` ranked descending; ties by `tiebreak` descending,
/// then by lower index.
template <typename DerivedScore, typename DerivedTie>
std::vector<int> rank_row(const Eigen::MatrixBase<DerivedScore>& scores, const Eigen::MatrixBase<DerivedTie>& tiebreak,
                          Eigen::Index i) {
  std::vector<int> order(static_cast<std::size_t>(scores.cols()));
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = static_cast<int>(j);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores(i, a) != scores(i, b)) return scores(i, a) > scores(i, b);
    return tiebreak(i, a) > tiebreak(i, b);
  });
  return order;
}

}  // namespace stm
