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

#ifndef POLYREC_SIMILARITY_HPP_
#define POLYREC_SIMILARITY_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>

#include "polyrec/interaction_matrix.hpp"
#include "polyrec/status.hpp"

namespace polyrec {

// a.b / (|a||b|), clamped to [-1, 1]; 0 when either norm is 0.
Result<double> Cosine(std::span<const double> a, std::span<const double> b);

// Cosine between two binary sets given their overlap and sizes.
inline double SetCosine(size_t overlap, size_t size_a, size_t size_b) {
  if (size_a == 0 || size_b == 0) return 0.0;
  return static_cast<double>(overlap) /
         (std::sqrt(static_cast<double>(size_a)) *
          std::sqrt(static_cast<double>(size_b)));
}

// |I_u n I_v| / (sqrt|I_u| sqrt|I_v|).
double UserSimilarity(const InteractionMatrix& matrix, std::string_view u,
                      std::string_view v);

// |U_i n U_j| / (sqrt|U_i| sqrt|U_j|).
double ItemSimilarity(const InteractionMatrix& matrix, std::string_view i,
                      std::string_view j);

}  // namespace polyrec

#endif  // POLYREC_SIMILARITY_HPP_
