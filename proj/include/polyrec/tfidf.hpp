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

#ifndef POLYREC_TFIDF_HPP_
#define POLYREC_TFIDF_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polyrec/interaction_matrix.hpp"
#include "polyrec/status.hpp"
#include "polyrec/types.hpp"

namespace polyrec {

// Lowercases ASCII and splits on every non-alphanumeric character.
std::vector<std::string> Tokenize(std::string_view text);

struct Document {
  std::string item_id;
  std::string text;
};

// Content index over a fixed corpus. Each document becomes a sparse vector
// with w(t, d) = tf(t, d) * ln(N / df(t)), L2-normalized. Terms present in
// every document weigh 0 and are dropped. An inverted posting list per term
// answers similarity queries.
class TfidfIndex {
 public:
  // (term id, weight) sorted by term id.
  using SparseVector = std::vector<std::pair<uint32_t, double>>;

  TfidfIndex() = default;

  // Later documents with a repeated item_id replace earlier ones.
  static TfidfIndex Build(std::vector<Document> documents);

  size_t num_documents() const { return doc_ids_.size(); }
  bool Contains(std::string_view item_id) const;

  // ln(N / df); 0 for terms not in the corpus.
  double Idf(std::string_view term) const;
  // Weight of `term` in `item_id`'s vector, before or after normalization.
  double Weight(std::string_view item_id, std::string_view term,
                bool normalized = true) const;
  // Cosine of two indexed documents; 0 if either is missing or all-zero.
  double Cosine(std::string_view a, std::string_view b) const;

  // Top-k documents by cosine to `item_id`, excluding itself; zero
  // similarities are dropped.
  Result<RankedList> SimilarItems(std::string_view item_id, size_t k,
                                  const ItemSet& exclude = {}) const;

  // Ranks documents the user has not interacted with by cosine to the mean
  // vector of the user's items. Unknown users get an empty list.
  RankedList RecommendForUser(const InteractionMatrix& matrix,
                              std::string_view user_id, size_t k,
                              const ItemSet& exclude = {}) const;

 private:
  using Skip = std::function<bool(uint32_t slot)>;

  const SparseVector* VectorOf(std::string_view item_id) const;
  std::vector<ScoredItem> Rank(const SparseVector& query, double query_norm,
                               size_t k, const Skip& skip) const;

  std::vector<std::string> doc_ids_;  // sorted; slot = position
  std::map<std::string, uint32_t, std::less<>> slot_of_;
  std::unordered_map<std::string, uint32_t> term_ids_;
  std::vector<double> idf_;
  std::vector<SparseVector> vectors_;  // unit length or empty
  std::vector<double> raw_norms_;
  std::vector<std::vector<std::pair<uint32_t, double>>> postings_;
};

}  // namespace polyrec

#endif  // POLYREC_TFIDF_HPP_
