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

#include "polyrec/embedding_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polyrec/similarity.hpp"

namespace polyrec {

Status ValidateVector(std::span<const double> vector, size_t dim) {
  if (vector.size() != dim) {
    return MakeError(ErrorCode::kDimensionMismatch,
                     "expected " + std::to_string(dim) + ", got " +
                         std::to_string(vector.size()));
  }
  for (size_t d = 0; d < vector.size(); ++d) {
    if (!std::isfinite(vector[d])) {
      return MakeError(ErrorCode::kNonFiniteComponent,
                       "component " + std::to_string(d));
    }
  }
  return Status::Ok();
}

namespace {

Result<std::vector<double>> Normalize(std::span<const double> vector,
                                      size_t dim) {
  if (Status s = ValidateVector(vector, dim); !s.ok()) return s.error();
  double norm_sq = 0.0;
  for (double x : vector) norm_sq += x * x;
  const double norm = std::sqrt(norm_sq);
  if (!(norm > 0.0)) return MakeError(ErrorCode::kZeroVector);
  if (!std::isfinite(norm)) {
    return MakeError(ErrorCode::kNonFiniteComponent, "norm overflows");
  }
  std::vector<double> unit(vector.begin(), vector.end());
  for (double& x : unit) x /= norm;
  return unit;
}

}  // namespace

EmbeddingSpace::EmbeddingSpace(std::string space_id, size_t dim)
    : space_id_(std::move(space_id)), dim_(dim), postings_(dim) {}

bool EmbeddingSpace::Contains(std::string_view item_id) const {
  return slot_of_.find(item_id) != slot_of_.end();
}

Status EmbeddingSpace::Index(std::string_view item_id,
                             std::span<const double> vector) {
  auto unit = Normalize(vector, dim_);
  if (!unit) return unit.error();

  if (auto it = slot_of_.find(item_id); it != slot_of_.end()) {
    Unlink(it->second);
    slot_of_.erase(it);
  }
  const auto slot = static_cast<uint32_t>(slots_.size());
  slots_.push_back(Slot{std::string(item_id),
                        std::vector<double>(vector.begin(), vector.end()),
                        std::move(*unit), true});
  const std::vector<double>& stored = slots_.back().unit;
  for (size_t d = 0; d < dim_; ++d) {
    if (stored[d] != 0.0) postings_[d].push_back(Posting{slot, stored[d]});
  }
  slot_of_.emplace(std::string(item_id), slot);
  MaybeCompact();
  return Status::Ok();
}

Status EmbeddingSpace::Remove(std::string_view item_id) {
  auto it = slot_of_.find(item_id);
  if (it == slot_of_.end()) {
    return MakeError(ErrorCode::kUnknownItem, std::string(item_id));
  }
  Unlink(it->second);
  slot_of_.erase(it);
  MaybeCompact();
  return Status::Ok();
}

void EmbeddingSpace::Unlink(uint32_t slot) {
  Slot& entry = slots_[slot];
  for (size_t d = 0; d < dim_; ++d) {
    if (entry.unit[d] == 0.0) continue;
    auto& list = postings_[d];
    auto pos = std::lower_bound(
        list.begin(), list.end(), slot,
        [](const Posting& p, uint32_t s) { return p.slot < s; });
    if (pos != list.end() && pos->slot == slot) list.erase(pos);
  }
  entry.live = false;
  entry.raw.clear();
  entry.unit.clear();
  entry.raw.shrink_to_fit();
  entry.unit.shrink_to_fit();
  ++dead_slots_;
}

void EmbeddingSpace::MaybeCompact() {
  if (dead_slots_ < 1024 || dead_slots_ * 2 < slots_.size()) return;
  std::vector<Slot> live;
  live.reserve(slots_.size() - dead_slots_);
  for (Slot& slot : slots_) {
    if (slot.live) live.push_back(std::move(slot));
  }
  slots_ = std::move(live);
  dead_slots_ = 0;
  for (auto& list : postings_) list.clear();
  slot_of_.clear();
  for (uint32_t s = 0; s < slots_.size(); ++s) {
    slot_of_.emplace(slots_[s].item_id, s);
    for (size_t d = 0; d < dim_; ++d) {
      if (slots_[s].unit[d] != 0.0) {
        postings_[d].push_back(Posting{s, slots_[s].unit[d]});
      }
    }
  }
}

const std::vector<double>* EmbeddingSpace::RawVector(
    std::string_view item_id) const {
  auto it = slot_of_.find(item_id);
  return it == slot_of_.end() ? nullptr : &slots_[it->second].raw;
}

const std::vector<double>* EmbeddingSpace::UnitVector(
    std::string_view item_id) const {
  auto it = slot_of_.find(item_id);
  return it == slot_of_.end() ? nullptr : &slots_[it->second].unit;
}

std::vector<std::pair<std::string, double>> EmbeddingSpace::PostingsOf(
    size_t d) const {
  std::vector<std::pair<std::string, double>> out;
  if (d >= dim_) return out;
  for (const Posting& p : postings_[d]) {
    out.emplace_back(slots_[p.slot].item_id, p.weight);
  }
  return out;
}

std::vector<size_t> EmbeddingSpace::KeptDimensions(
    std::span<const double> unit_query, std::optional<size_t> prune_m) {
  std::vector<size_t> dims(unit_query.size());
  std::iota(dims.begin(), dims.end(), 0);
  if (prune_m && *prune_m < dims.size()) {
    std::stable_sort(dims.begin(), dims.end(), [&](size_t a, size_t b) {
      return std::abs(unit_query[a]) > std::abs(unit_query[b]);
    });
    dims.resize(*prune_m);
    std::sort(dims.begin(), dims.end());
  }
  return dims;
}

Result<std::vector<double>> EmbeddingSpace::NormalizeQuery(
    std::span<const double> query) const {
  return Normalize(query, dim_);
}

Result<RankedList> EmbeddingSpace::QueryTopK(std::span<const double> query,
                                             size_t k,
                                             std::optional<size_t> prune_m,
                                             const ItemSet& exclude) const {
  auto unit = NormalizeQuery(query);
  if (!unit) return unit.error();
  RankedList out{.entries = {}, .source_kind = SourceKind::kEmbedding};
  if (k == 0 || slot_of_.empty()) return out;

  std::vector<double> acc(slots_.size(), 0.0);
  std::vector<char> touched(slots_.size(), 0);
  for (size_t d : KeptDimensions(*unit, prune_m)) {
    const double q = (*unit)[d];
    if (q == 0.0) continue;
    for (const Posting& p : postings_[d]) {
      acc[p.slot] += q * p.weight;
      touched[p.slot] = 1;
    }
  }
  std::vector<std::pair<double, uint32_t>> candidates;
  for (uint32_t s = 0; s < slots_.size(); ++s) {
    if (touched[s] && acc[s] > 0.0) candidates.emplace_back(std::min(acc[s], 1.0), s);
  }
  out.entries = TopKByKey(
      std::move(candidates), k,
      [this](uint32_t s) -> const std::string& { return slots_[s].item_id; },
      [&](uint32_t s) { return !exclude.empty() && exclude.count(slots_[s].item_id) > 0; });
  return out;
}

Result<RankedList> EmbeddingSpace::ExactTopK(std::span<const double> query,
                                             size_t k,
                                             const ItemSet& exclude) const {
  if (Status s = ValidateVector(query, dim_); !s.ok()) return s.error();
  RankedList out{.entries = {}, .source_kind = SourceKind::kEmbedding};
  bool nonzero = false;
  for (double x : query) nonzero = nonzero || x != 0.0;
  if (!nonzero) return MakeError(ErrorCode::kZeroVector);
  if (k == 0) return out;

  std::vector<ScoredItem> candidates;
  for (const auto& [id, slot] : slot_of_) {
    if (!exclude.empty() && exclude.count(id) > 0) continue;
    auto score = Cosine(query, slots_[slot].raw);
    if (!score) return score.error();
    if (*score > 0.0) candidates.push_back(ScoredItem{id, *score});
  }
  out.entries = TopK(std::move(candidates), k);
  return out;
}

std::vector<std::pair<std::string, std::vector<double>>> EmbeddingSpace::Items()
    const {
  std::vector<std::pair<std::string, std::vector<double>>> out;
  out.reserve(slot_of_.size());
  for (const auto& [id, slot] : slot_of_) out.emplace_back(id, slots_[slot].raw);
  return out;
}

}  // namespace polyrec
