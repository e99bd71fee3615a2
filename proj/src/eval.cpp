#include "stm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "stm/error.hpp"
#include "stm/pmi.hpp"
#include "stm/random.hpp"

namespace stm::eval {

std::map<int, int> pmi_align(const std::vector<int>& assignments, const std::vector<std::optional<int>>& gold,
                             int num_labels) {
  if (assignments.size() != gold.size()) throw ValidationError("assignments and gold differ in length");
  if (num_labels < 1) throw ValidationError("label set is empty");
  std::set<int> clusters(assignments.begin(), assignments.end());
  std::map<int, Eigen::Index> row_of;
  for (int c : clusters) row_of.emplace(c, static_cast<Eigen::Index>(row_of.size()));

  Eigen::MatrixXi joint = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(clusters.size()), num_labels);
  std::size_t labeled = 0;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (!gold[i]) continue;
    if (*gold[i] < 0 || *gold[i] >= num_labels) throw ValidationError("gold label index out of range");
    ++joint(row_of[assignments[i]], *gold[i]);
    ++labeled;
  }
  if (labeled == 0) throw ValidationError("PMI alignment needs a non-empty labeled subset");

  const Eigen::MatrixXd pmi = smoothed_pmi(joint);
  std::map<int, int> mapping;
  for (const auto& [cluster, row] : row_of) mapping[cluster] = rank_row(pmi, joint, row).front();
  return mapping;
}

AccuracyReport accuracy(const std::vector<SourceType>& predicted, const std::vector<SourceType>& gold,
                        const std::vector<std::size_t>& subset) {
  if (subset.empty()) throw ValidationError("accuracy needs a non-empty subset");
  if (predicted.size() != gold.size()) throw ValidationError("predicted and gold differ in length");
  AccuracyReport r;
  r.total = subset.size();
  std::size_t exact = 0, aff = 0, role = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> by_aff, by_role;  // (correct, total)
  for (auto i : subset) {
    if (i >= gold.size()) throw ValidationError("subset index out of range");
    const auto& p = predicted[i];
    const auto& g = gold[i];
    const bool hit = p.same_cell(g);
    exact += hit;
    aff += p.affiliation == g.affiliation;
    role += p.role == g.role;
    auto& a = by_aff[std::string(to_string(g.affiliation))];
    a.first += hit;
    ++a.second;
    auto& ro = by_role[std::string(to_string(g.role))];
    ro.first += hit;
    ++ro.second;
  }
  const double n = static_cast<double>(subset.size());
  r.overall = static_cast<double>(exact) / n;
  r.affiliation = static_cast<double>(aff) / n;
  r.role = static_cast<double>(role) / n;
  for (const auto& [k, v] : by_aff) r.per_affiliation[k] = static_cast<double>(v.first) / static_cast<double>(v.second);
  for (const auto& [k, v] : by_role) r.per_role[k] = static_cast<double>(v.first) / static_cast<double>(v.second);
  return r;
}

double aligned_accuracy(const std::vector<int>& clusters, const std::vector<int>& truth, int num_labels) {
  if (clusters.empty() || clusters.size() != truth.size())
    throw ValidationError("aligned accuracy needs equal-length, non-empty inputs");
  std::vector<std::optional<int>> gold(truth.begin(), truth.end());
  const auto mapping = pmi_align(clusters, gold, num_labels);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < clusters.size(); ++i) hits += mapping.at(clusters[i]) == truth[i];
  return static_cast<double>(hits) / static_cast<double>(clusters.size());
}

Eigen::MatrixXi confusion_matrix(const std::vector<int>& predicted, const std::vector<int>& gold,
                                 const std::vector<std::size_t>& subset, int num_labels) {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(num_labels, num_labels);
  for (auto i : subset) {
    if (gold[i] < 0 || gold[i] >= num_labels || predicted[i] < 0 || predicted[i] >= num_labels)
      throw ValidationError("label index out of range in confusion matrix");
    ++m(gold[i], predicted[i]);
  }
  return m;
}

std::string confusion_csv(const Eigen::MatrixXi& m, const std::vector<std::string>& labels) {
  std::ostringstream out;
  out << "gold\\predicted";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << m(i, j);
    out << '\n';
  }
  return out.str();
}

Split train_validation_split(const std::vector<int>& labels, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ValidationError("split fraction must lie in (0, 1)");
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < labels.size(); ++i) by_label[labels[i]].push_back(i);

  Rng rng(seed);
  struct Quota {
    int label;
    std::size_t take;
    double remainder;
  };
  std::vector<Quota> quotas;
  std::size_t assigned = 0;
  for (auto& [label, items] : by_label) {
    for (std::size_t i = items.size(); i > 1; --i)  // Fisher-Yates
      std::swap(items[i - 1], items[std::min(static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i)), i - 1)]);
    const double exact = fraction * static_cast<double>(items.size());
    const auto take = static_cast<std::size_t>(std::floor(exact));
    quotas.push_back({label, take, exact - static_cast<double>(take)});
    assigned += take;
  }
  const auto target = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(labels.size())));
  std::vector<std::size_t> order(quotas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return quotas[a].remainder > quotas[b].remainder; });
  for (std::size_t i = 0; assigned < target && i < order.size(); ++i) {
    auto& q = quotas[order[i]];
    if (q.take < by_label[q.label].size()) {
      ++q.take;
      ++assigned;
    }
  }

  Split split;
  for (const auto& q : quotas) {
    const auto& items = by_label[q.label];
    split.train.insert(split.train.end(), items.begin(), items.begin() + static_cast<std::ptrdiff_t>(q.take));
    split.validation.insert(split.validation.end(), items.begin() + static_cast<std::ptrdiff_t>(q.take), items.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  if (split.train.empty() || split.validation.empty())
    throw ValidationError("degenerate split: one side is empty");
  return split;
}

}  // namespace stm::eval
