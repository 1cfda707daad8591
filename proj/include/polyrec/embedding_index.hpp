// Copyright 2026 The Polyrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLYREC_EMBEDDING_INDEX_HPP_
#define POLYREC_EMBEDDING_INDEX_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyrec/status.hpp"
#include "polyrec/types.hpp"

namespace polyrec {

// Dense item embeddings laid out search-engine style: one posting list per
// dimension holding (item, weight) for every item whose L2-normalized vector
// is nonzero in that dimension. A query walks the postings of its kept
// dimensions and multiply-accumulates, so with every dimension kept the
// score is the exact cosine similarity. Keeping only the `prune_m` largest
// |q_d| trades recall for fewer postings walked.
//
// Not internally synchronized; callers publish immutable copies.
class EmbeddingSpace {
 public:
  struct Posting {
    uint32_t slot;
    double weight;
  };

  EmbeddingSpace(std::string space_id, size_t dim);

  const std::string& space_id() const { return space_id_; }
  size_t dim() const { return dim_; }
  size_t size() const { return slot_of_.size(); }
  bool Contains(std::string_view item_id) const;

  // Normalizes and scatters `vector` into the postings, replacing any
  // previous vector of the item.
  Status Index(std::string_view item_id, std::span<const double> vector);
  Status Remove(std::string_view item_id);

  // Vector as ingested / after normalization; nullptr if not indexed.
  const std::vector<double>* RawVector(std::string_view item_id) const;
  const std::vector<double>* UnitVector(std::string_view item_id) const;

  // (item_id, weight) pairs of one dimension in posting order.
  std::vector<std::pair<std::string, double>> PostingsOf(size_t d) const;

  // Top-k by accumulated score over kept dimensions; nullopt prune_m keeps
  // all. Ties by item_id; items scoring <= 0 are dropped.
  Result<RankedList> QueryTopK(std::span<const double> query, size_t k,
                               std::optional<size_t> prune_m,
                               const ItemSet& exclude = {}) const;

  // Exhaustive cosine against every stored vector, same ordering and
  // filtering rules as QueryTopK.
  Result<RankedList> ExactTopK(std::span<const double> query, size_t k,
                               const ItemSet& exclude = {}) const;

  // Dimensions kept for `query` under `prune_m`, ascending. Exposed for
  // tests.
  static std::vector<size_t> KeptDimensions(std::span<const double> unit_query,
                                            std::optional<size_t> prune_m);

  // Items in ascending id order with their ingested vectors.
  std::vector<std::pair<std::string, std::vector<double>>> Items() const;

 private:
  struct Slot {
    std::string item_id;
    std::vector<double> raw;
    std::vector<double> unit;
    bool live = false;
  };

  Result<std::vector<double>> NormalizeQuery(std::span<const double> query) const;
  void Unlink(uint32_t slot);
  void MaybeCompact();

  std::string space_id_;
  size_t dim_;
  std::vector<Slot> slots_;
  std::map<std::string, uint32_t, std::less<>> slot_of_;
  // Per dimension, sorted by slot (slots are handed out in increasing order).
  std::vector<std::vector<Posting>> postings_;
  size_t dead_slots_ = 0;
};

// Checks dimension and finiteness of an incoming vector; the norm check is
// left to Index.
Status ValidateVector(std::span<const double> vector, size_t dim);

}  // namespace polyrec

#endif  // POLYREC_EMBEDDING_INDEX_HPP_
