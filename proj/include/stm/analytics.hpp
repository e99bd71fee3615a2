#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stm/corpus.hpp"
#include "stm/model.hpp"

namespace stm::analytics {

/// Display name for source-type `s`; indices past the label space get a generic name.
std::string source_type_name(const LabelSpace& labels, int s);

struct LabelCount {
  int source_type = 0;
  std::string label;
  long count = 0;
};

/// Non-zero source-type totals over posterior modes, descending (ties by index).
std::vector<LabelCount> source_type_counts(const ModelState& state, const LabelSpace& labels);

struct TimeShare {
  Date bucket_start;
  int source_type = 0;
  std::string label;
  double share = 0.0;
};

struct CountsOverTime {
  std::vector<TimeShare> rows;
  std::vector<Date> empty_buckets;
  std::size_t excluded_docs = 0;  // documents without a timestamp
};

/// Per bucket of `bucket_months` months (starting at the earliest dated document's
/// month), the share of each selected source-type among all sources in the bucket.
/// An empty `selected` means every source-type.
CountsOverTime counts_over_time(const ModelState& state, const TrainingData& data,
                                const std::vector<std::optional<Date>>& timestamps, const LabelSpace& labels,
                                int bucket_months, const std::vector<int>& selected = {});

struct RankedTopic {
  int topic = 0;
  double pmi = 0.0;
  std::vector<std::string> top_words;
};

struct SourceTypeTopics {
  int source_type = 0;
  std::string label;
  std::vector<RankedTopic> topics;
};

/// Most probable words of topic `k` under the smoothed topic-word estimate.
std::vector<std::string> top_words(const ModelState& state, const Vocabulary& vocabulary, int k, int n);

/// For each source-type, its top `m` topics by smoothed PMI over n_topic_by_src.
std::vector<SourceTypeTopics> top_topics_per_source_type(const ModelState& state, const Vocabulary& vocabulary,
                                                         const LabelSpace& labels, int m, int words_per_topic = 3);

struct RankedSourceType {
  int source_type = 0;
  std::string label;
  double pmi = 0.0;
};

struct DocTypeSources {
  int doc_type = 0;
  std::vector<RankedSourceType> source_types;
};

/// For each document-type, its top `m` source-types by smoothed PMI over n_src_by_doc.
std::vector<DocTypeSources> doc_type_source_type_table(const ModelState& state, const LabelSpace& labels, int m);

std::string to_csv(const std::vector<LabelCount>& rows);
std::string to_csv(const CountsOverTime& table);
std::string to_csv(const std::vector<SourceTypeTopics>& table);
std::string to_csv(const std::vector<DocTypeSources>& table);

}  // namespace stm::analytics
