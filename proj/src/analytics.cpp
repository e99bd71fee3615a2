#include "stm/analytics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "stm/error.hpp"
#include "stm/pmi.hpp"

namespace stm::analytics {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

std::string source_type_name(const LabelSpace& labels, int s) {
  return s < labels.size() ? labels.label(s) : "source-type-" + std::to_string(s);
}

std::vector<LabelCount> source_type_counts(const ModelState& state, const LabelSpace& labels) {
  const Eigen::VectorXi modes = source_type_modes(state);
  std::vector<long> counts(static_cast<std::size_t>(state.hyper.num_source_types()), 0);
  for (Eigen::Index g = 0; g < modes.size(); ++g) ++counts[static_cast<std::size_t>(modes(g))];
  std::vector<LabelCount> out;
  for (std::size_t s = 0; s < counts.size(); ++s)
    if (counts[s] > 0) out.push_back({static_cast<int>(s), source_type_name(labels, static_cast<int>(s)), counts[s]});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.count > b.count; });
  return out;
}

CountsOverTime counts_over_time(const ModelState& state, const TrainingData& data,
                                const std::vector<std::optional<Date>>& timestamps, const LabelSpace& labels,
                                int bucket_months, const std::vector<int>& selected) {
  if (bucket_months < 1) throw ValidationError("bucket_months must be >= 1");
  if (timestamps.size() != data.docs.size()) throw ValidationError("timestamps must cover every document");
  const int S = state.hyper.num_source_types();
  for (int s : selected)
    if (s < 0 || s >= S) throw ValidationError("selected source-type out of range");
  const Eigen::VectorXi modes = source_type_modes(state);

  CountsOverTime out;
  std::optional<int> first_month, last_month;
  for (const auto& ts : timestamps) {
    if (!ts) continue;
    first_month = std::min(first_month.value_or(ts->month_index()), ts->month_index());
    last_month = std::max(last_month.value_or(ts->month_index()), ts->month_index());
  }
  for (const auto& ts : timestamps) out.excluded_docs += !ts;
  if (!first_month) return out;

  const int num_buckets = (*last_month - *first_month) / bucket_months + 1;
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(num_buckets, S);
  for (std::size_t d = 0; d < data.docs.size(); ++d) {
    if (!timestamps[d]) continue;
    const int b = (timestamps[d]->month_index() - *first_month) / bucket_months;
    const auto& doc = data.docs[d];
    for (int n = 0; n < doc.num_sources; ++n) counts(b, modes(doc.source_offset + n)) += 1.0;
  }
  std::vector<int> shown = selected;
  if (shown.empty())
    for (int s = 0; s < S; ++s) shown.push_back(s);
  for (int b = 0; b < num_buckets; ++b) {
    const Date start = Date::from_month_index(*first_month + b * bucket_months);
    const double total = counts.row(b).sum();
    if (total == 0.0) {
      out.empty_buckets.push_back(start);
      continue;
    }
    for (int s : shown) out.rows.push_back({start, s, source_type_name(labels, s), counts(b, s) / total});
  }
  return out;
}

std::vector<std::string> top_words(const ModelState& state, const Vocabulary& vocabulary, int k, int n) {
  const auto& nw = state.counts.n_word_by_topic;
  const double hw = state.hyper.word_prior;
  const double denom = state.counts.n_topic_total(k) + static_cast<double>(nw.rows()) * hw;
  std::vector<std::pair<double, int>> scored;
  scored.reserve(static_cast<std::size_t>(nw.rows()));
  for (Eigen::Index w = 0; w < nw.rows(); ++w) scored.emplace_back((nw(w, k) + hw) / denom, static_cast<int>(w));
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(std::max(n, 0)), scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                    [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < take; ++i) {
    const int w = scored[i].second;
    out.push_back(w < vocabulary.size() ? vocabulary.term(w) : "w" + std::to_string(w));
  }
  return out;
}

std::vector<SourceTypeTopics> top_topics_per_source_type(const ModelState& state, const Vocabulary& vocabulary,
                                                         const LabelSpace& labels, int m, int words_per_topic) {
  if (m < 1) throw ValidationError("m must be >= 1");
  const Eigen::MatrixXi joint = state.counts.n_topic_by_src.transpose().cast<int>();  // S x K
  const Eigen::MatrixXd pmi = smoothed_pmi(joint);
  std::vector<SourceTypeTopics> out;
  for (Eigen::Index s = 0; s < joint.rows(); ++s) {
    SourceTypeTopics row{static_cast<int>(s), source_type_name(labels, static_cast<int>(s)), {}};
    const auto ranked = rank_row(pmi, joint, s);
    for (std::size_t r = 0; r < ranked.size() && static_cast<int>(r) < m; ++r) {
      const int k = ranked[r];
      row.topics.push_back({k, pmi(s, k), top_words(state, vocabulary, k, words_per_topic)});
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<DocTypeSources> doc_type_source_type_table(const ModelState& state, const LabelSpace& labels, int m) {
  if (m < 1) throw ValidationError("m must be >= 1");
  const Eigen::MatrixXi joint = state.counts.n_src_by_doc.cast<int>();  // T x S
  const Eigen::MatrixXd pmi = smoothed_pmi(joint);
  std::vector<DocTypeSources> out;
  for (Eigen::Index t = 0; t < joint.rows(); ++t) {
    DocTypeSources row{static_cast<int>(t), {}};
    const auto ranked = rank_row(pmi, joint, t);
    for (std::size_t r = 0; r < ranked.size() && static_cast<int>(r) < m; ++r)
      row.source_types.push_back({ranked[r], source_type_name(labels, ranked[r]), pmi(t, ranked[r])});
    out.push_back(std::move(row));
  }
  return out;
}

std::string to_csv(const std::vector<LabelCount>& rows) {
  std::ostringstream out;
  out << "label,count\n";
  for (const auto& r : rows) out << r.label << ',' << r.count << '\n';
  return out.str();
}

std::string to_csv(const CountsOverTime& table) {
  std::ostringstream out;
  out << "bucket_start,label,share\n";
  for (const auto& r : table.rows) out << r.bucket_start.iso() << ',' << r.label << ',' << fmt(r.share) << '\n';
  return out.str();
}

std::string to_csv(const std::vector<SourceTypeTopics>& table) {
  std::ostringstream out;
  out << "label,rank,topic,pmi,top_words\n";
  for (const auto& row : table)
    for (std::size_t r = 0; r < row.topics.size(); ++r) {
      const auto& t = row.topics[r];
      out << row.label << ',' << r + 1 << ',' << t.topic << ',' << fmt(t.pmi) << ',';
      for (std::size_t i = 0; i < t.top_words.size(); ++i) out << (i ? " " : "") << t.top_words[i];
      out << '\n';
    }
  return out.str();
}

std::string to_csv(const std::vector<DocTypeSources>& table) {
  std::ostringstream out;
  out << "doc_type,rank,label,pmi\n";
  for (const auto& row : table)
    for (std::size_t r = 0; r < row.source_types.size(); ++r)
      out << row.doc_type << ',' << r + 1 << ',' << row.source_types[r].label << ','
          << fmt(row.source_types[r].pmi) << '\n';
  return out.str();
}

}  // namespace stm::analytics
