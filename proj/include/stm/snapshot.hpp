#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stm/corpus.hpp"
#include "stm/model.hpp"

namespace stm {

inline constexpr int kSnapshotVersion = 1;

/// A model state plus what is needed to interpret it without the training run: label
/// names, vocabulary, document ids and the fingerprint of the data it was fitted to.
struct Snapshot {
  ModelState state;
  LabelSpace labels = LabelSpace::make_default();
  Vocabulary vocabulary;
  std::vector<std::string> doc_ids;
  std::vector<int> sources_per_doc;
  std::uint32_t data_fingerprint = 0;

  friend bool operator==(const Snapshot& a, const Snapshot& b);
};

/// Text container: `STMSNAP <version> <crc32 hex> <length>\n` followed by a JSON body.
std::string encode_snapshot(const Snapshot& snapshot);
/// Throws ValidationError on a bad header, version mismatch, length or checksum mismatch.
Snapshot decode_snapshot(const std::string& bytes);

void save_snapshot(const Snapshot& snapshot, const std::string& path);
Snapshot load_snapshot(const std::string& path);

void save_state(const ModelState& state, const std::string& path);
ModelState load_state(const std::string& path);

}  // namespace stm
