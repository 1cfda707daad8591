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

// Brute-force reference implementations used as test oracles. They share
// no code with the library: plain containers, exhaustive loops.

#ifndef POLYREC_TESTS_ORACLE_BRUTE_FORCE_HPP_
#define POLYREC_TESTS_ORACLE_BRUTE_FORCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Sets = std::map<std::string, std::set<std::string>>;

struct Scored {
  std::string id;
  double score;
};

// Score descending, id ascending, first k.
inline std::vector<Scored> SortTop(const std::map<std::string, double>& scores,
                                   size_t k) {
  std::vector<Scored> all;
  for (const auto& [id, s] : scores) all.push_back({id, s});
  std::stable_sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

inline Sets Invert(const Sets& sets) {
  Sets out;
  for (const auto& [key, values] : sets) {
    for (const auto& v : values) out[v].insert(key);
  }
  return out;
}

inline double SetCos(const std::set<std::string>& a,
                     const std::set<std::string>& b) {
  if (a.empty() || b.empty()) return 0.0;
  size_t overlap = 0;
  for (const auto& x : a) overlap += b.count(x);
  return static_cast<double>(overlap) /
         (std::sqrt(static_cast<double>(a.size())) *
          std::sqrt(static_cast<double>(b.size())));
}

inline const std::set<std::string>& Get(const Sets& sets, const std::string& key) {
  static const std::set<std::string> kEmpty;
  auto it = sets.find(key);
  return it == sets.end() ? kEmpty : it->second;
}

inline std::vector<Scored> UserCf(const Sets& by_user, const std::string& user,
                                  size_t k, size_t k_neighbors) {
  const auto& mine = Get(by_user, user);
  std::map<std::string, double> sims;
  for (const auto& [other, items] : by_user) {
    if (other == user) continue;
    double s = SetCos(mine, items);
    if (s > 0) sims[other] = s;
  }
  std::vector<Scored> neighbors = SortTop(sims, k_neighbors);
  std::map<std::string, double> scores;
  for (const Scored& n : neighbors) {
    for (const auto& item : Get(by_user, n.id)) {
      if (mine.count(item) == 0) scores[item] += n.score;
    }
  }
  return SortTop(scores, k);
}

inline std::vector<Scored> ItemCf(const Sets& by_user, const std::string& user,
                                  size_t k) {
  const Sets by_item = Invert(by_user);
  const auto& mine = Get(by_user, user);
  std::map<std::string, double> scores;
  for (const auto& [candidate, users] : by_item) {
    if (mine.count(candidate) > 0) continue;
    double total = 0.0;
    bool touched = false;
    for (const auto& j : mine) {
      double s = SetCos(users, Get(by_item, j));
      if (s > 0) {
        total += s;
        touched = true;
      }
    }
    if (touched) scores[candidate] = total;
  }
  return SortTop(scores, k);
}

inline double Cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline std::vector<Scored> ExactTopK(
    const std::map<std::string, std::vector<double>>& vectors,
    const std::vector<double>& query, size_t k,
    const std::set<std::string>& exclude = {}) {
  std::map<std::string, double> scores;
  for (const auto& [id, v] : vectors) {
    if (exclude.count(id)) continue;
    double s = Cosine(v, query);
    if (s > 0) scores[id] = s;
  }
  return SortTop(scores, k);
}

// TF-IDF with raw tf, idf = ln(N/df), L2-normalized. Term -> weight.
inline std::map<std::string, std::map<std::string, double>> Tfidf(
    const std::map<std::string, std::vector<std::string>>& docs) {
  std::map<std::string, int> df;
  for (const auto& [id, tokens] : docs) {
    for (const auto& t : std::set<std::string>(tokens.begin(), tokens.end())) {
      ++df[t];
    }
  }
  const double n = static_cast<double>(docs.size());
  std::map<std::string, std::map<std::string, double>> out;
  for (const auto& [id, tokens] : docs) {
    std::map<std::string, double> v;
    for (const auto& t : tokens) v[t] += 1.0;
    double norm = 0;
    for (auto& [t, w] : v) {
      w *= std::log(n / df[t]);
      norm += w * w;
    }
    norm = std::sqrt(norm);
    for (auto& [t, w] : v) w = norm > 0 ? w / norm : 0.0;
    out[id] = v;
  }
  return out;
}

inline double SparseCos(const std::map<std::string, double>& a,
                        const std::map<std::string, double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (const auto& [t, w] : a) {
    na += w * w;
    auto it = b.find(t);
    if (it != b.end()) dot += w * it->second;
  }
  for (const auto& [t, w] : b) nb += w * w;
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

struct Event {
  std::string user;
  std::string item;
  int64_t timestamp;
};

inline std::vector<Scored> Popularity(const std::vector<Event>& events, size_t k,
                                      const std::set<std::string>& exclude,
                                      int64_t since = INT64_MIN) {
  std::map<std::string, double> counts;
  for (const Event& e : events) {
    if (e.timestamp >= since && exclude.count(e.item) == 0) counts[e.item] += 1;
  }
  return SortTop(counts, k);
}

// Weighted sum of min-max normalized scores.
inline std::vector<Scored> Fuse(
    const std::vector<std::pair<double, std::vector<Scored>>>& sources, size_t k,
    const std::set<std::string>& exclude = {}) {
  std::map<std::string, double> fused;
  for (const auto& [weight, list] : sources) {
    if (weight == 0 || list.empty()) continue;
    double lo = list[0].score, hi = list[0].score;
    for (const Scored& s : list) {
      lo = std::min(lo, s.score);
      hi = std::max(hi, s.score);
    }
    for (const Scored& s : list) {
      if (exclude.count(s.id)) continue;
      double norm = hi == lo ? 1.0 : (s.score - lo) / (hi - lo);
      fused[s.id] += weight * norm;
    }
  }
  return SortTop(fused, k);
}

}  // namespace oracle

#endif  // POLYREC_TESTS_ORACLE_BRUTE_FORCE_HPP_
