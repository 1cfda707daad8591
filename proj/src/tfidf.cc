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

#include "polyrec/tfidf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace polyrec {

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      current.push_back(static_cast<char>(std::tolower(uc)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TfidfIndex TfidfIndex::Build(std::vector<Document> documents) {
  std::stable_sort(documents.begin(), documents.end(),
                   [](const Document& a, const Document& b) {
                     return a.item_id < b.item_id;
                   });
  // Keep the last of each run of equal ids.
  std::vector<Document> unique_docs;
  for (auto& doc : documents) {
    if (!unique_docs.empty() && unique_docs.back().item_id == doc.item_id) {
      unique_docs.back() = std::move(doc);
    } else {
      unique_docs.push_back(std::move(doc));
    }
  }

  TfidfIndex index;
  const size_t n = unique_docs.size();
  std::vector<std::map<uint32_t, int64_t>> term_counts(n);
  std::vector<int64_t> df;
  for (size_t slot = 0; slot < n; ++slot) {
    index.doc_ids_.push_back(unique_docs[slot].item_id);
    index.slot_of_.emplace(unique_docs[slot].item_id,
                           static_cast<uint32_t>(slot));
    for (std::string& token : Tokenize(unique_docs[slot].text)) {
      auto [it, inserted] = index.term_ids_.emplace(
          std::move(token), static_cast<uint32_t>(df.size()));
      if (inserted) df.push_back(0);
      if (term_counts[slot][it->second]++ == 0) ++df[it->second];
    }
  }

  index.idf_.resize(df.size());
  for (size_t t = 0; t < df.size(); ++t) {
    index.idf_[t] = std::log(static_cast<double>(n) / static_cast<double>(df[t]));
  }

  index.vectors_.resize(n);
  index.raw_norms_.assign(n, 0.0);
  index.postings_.resize(df.size());
  for (size_t slot = 0; slot < n; ++slot) {
    SparseVector& vec = index.vectors_[slot];
    double norm_sq = 0.0;
    for (const auto& [term, count] : term_counts[slot]) {
      const double weight = static_cast<double>(count) * index.idf_[term];
      if (weight == 0.0) continue;
      vec.emplace_back(term, weight);
      norm_sq += weight * weight;
    }
    const double norm = std::sqrt(norm_sq);
    index.raw_norms_[slot] = norm;
    for (auto& [term, weight] : vec) {
      weight /= norm;
      index.postings_[term].emplace_back(static_cast<uint32_t>(slot), weight);
    }
  }
  return index;
}

bool TfidfIndex::Contains(std::string_view item_id) const {
  return slot_of_.find(item_id) != slot_of_.end();
}

const TfidfIndex::SparseVector* TfidfIndex::VectorOf(
    std::string_view item_id) const {
  auto it = slot_of_.find(item_id);
  return it == slot_of_.end() ? nullptr : &vectors_[it->second];
}

double TfidfIndex::Idf(std::string_view term) const {
  auto it = term_ids_.find(std::string(term));
  return it == term_ids_.end() ? 0.0 : idf_[it->second];
}

double TfidfIndex::Weight(std::string_view item_id, std::string_view term,
                          bool normalized) const {
  auto slot = slot_of_.find(item_id);
  auto term_it = term_ids_.find(std::string(term));
  if (slot == slot_of_.end() || term_it == term_ids_.end()) return 0.0;
  const SparseVector& vec = vectors_[slot->second];
  auto entry = std::lower_bound(
      vec.begin(), vec.end(), term_it->second,
      [](const auto& e, uint32_t t) { return e.first < t; });
  if (entry == vec.end() || entry->first != term_it->second) return 0.0;
  return normalized ? entry->second : entry->second * raw_norms_[slot->second];
}

double TfidfIndex::Cosine(std::string_view a, std::string_view b) const {
  const SparseVector* va = VectorOf(a);
  const SparseVector* vb = VectorOf(b);
  if (va == nullptr || vb == nullptr) return 0.0;
  double dot = 0.0;
  auto ia = va->begin();
  auto ib = vb->begin();
  while (ia != va->end() && ib != vb->end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return std::min(dot, 1.0);
}

std::vector<ScoredItem> TfidfIndex::Rank(const SparseVector& query,
                                         double query_norm, size_t k,
                                         const Skip& skip) const {
  if (k == 0 || query.empty() || !(query_norm > 0.0)) return {};
  std::vector<double> acc(doc_ids_.size(), 0.0);
  for (const auto& [term, query_weight] : query) {
    for (const auto& [slot, weight] : postings_[term]) {
      acc[slot] += query_weight * weight;
    }
  }
  std::vector<std::pair<double, uint32_t>> candidates;
  for (uint32_t slot = 0; slot < acc.size(); ++slot) {
    if (acc[slot] == 0.0) continue;
    const double score = std::min(acc[slot] / query_norm, 1.0);
    if (score > 0.0) candidates.emplace_back(score, slot);
  }
  return TopKByKey(
      std::move(candidates), k,
      [this](uint32_t slot) -> const std::string& { return doc_ids_[slot]; }, skip);
}

Result<RankedList> TfidfIndex::SimilarItems(std::string_view item_id, size_t k,
                                            const ItemSet& exclude) const {
  auto it = slot_of_.find(item_id);
  if (it == slot_of_.end()) {
    return MakeError(ErrorCode::kUnknownItem, std::string(item_id));
  }
  const uint32_t self = it->second;
  RankedList out{.entries = {}, .source_kind = SourceKind::kContent};
  out.entries = Rank(vectors_[self], 1.0, k, [&](uint32_t slot) {
    return slot == self || (!exclude.empty() && exclude.count(doc_ids_[slot]));
  });
  return out;
}

RankedList TfidfIndex::RecommendForUser(const InteractionMatrix& matrix,
                                        std::string_view user_id, size_t k,
                                        const ItemSet& exclude) const {
  RankedList out{.entries = {}, .source_kind = SourceKind::kContent};
  const auto& seen = matrix.ItemsOf(user_id);
  if (seen.empty()) return out;

  // Mean of the user's item vectors; items without a document contribute
  // nothing.
  std::map<uint32_t, double> profile;
  size_t indexed = 0;
  for (const auto& item : seen) {
    const SparseVector* vec = VectorOf(item);
    if (vec == nullptr) continue;
    ++indexed;
    for (const auto& [term, weight] : *vec) profile[term] += weight;
  }
  if (indexed == 0) return out;
  SparseVector query;
  double norm_sq = 0.0;
  for (const auto& [term, sum] : profile) {
    const double mean = sum / static_cast<double>(indexed);
    if (mean == 0.0) continue;
    query.emplace_back(term, mean);
    norm_sq += mean * mean;
  }
  out.entries = Rank(query, std::sqrt(norm_sq), k, [&](uint32_t slot) {
    const std::string& id = doc_ids_[slot];
    return seen.count(id) > 0 || (!exclude.empty() && exclude.count(id) > 0);
  });
  return out;
}

}  // namespace polyrec
