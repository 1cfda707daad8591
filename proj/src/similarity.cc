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

#include "polyrec/similarity.hpp"

#include <algorithm>
#include <string>

namespace polyrec {

namespace {

size_t Overlap(const InteractionMatrix::IdSet& a,
               const InteractionMatrix::IdSet& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  size_t count = 0;
  for (const auto& id : small) count += large.count(id);
  return count;
}

}  // namespace

Result<double> Cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    return MakeError(ErrorCode::kDimensionMismatch,
                     std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  for (size_t d = 0; d < a.size(); ++d) {
    if (!std::isfinite(a[d]) || !std::isfinite(b[d])) {
      return MakeError(ErrorCode::kNonFiniteComponent,
                       "component " + std::to_string(d));
    }
    dot += a[d] * b[d];
    norm_a += a[d] * a[d];
    norm_b += b[d] * b[d];
  }
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(norm_a) * std::sqrt(norm_b)), -1.0, 1.0);
}

double UserSimilarity(const InteractionMatrix& matrix, std::string_view u,
                      std::string_view v) {
  const auto& items_u = matrix.ItemsOf(u);
  const auto& items_v = matrix.ItemsOf(v);
  return SetCosine(Overlap(items_u, items_v), items_u.size(), items_v.size());
}

double ItemSimilarity(const InteractionMatrix& matrix, std::string_view i,
                      std::string_view j) {
  const auto& users_i = matrix.UsersOf(i);
  const auto& users_j = matrix.UsersOf(j);
  return SetCosine(Overlap(users_i, users_j), users_i.size(), users_j.size());
}

}  // namespace polyrec
