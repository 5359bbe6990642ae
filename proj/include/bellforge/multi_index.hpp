// Copyright 2026 The BellForge Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

namespace bellforge {

/// Photon-number tuple / monomial exponent vector.
using Monomial = std::vector<int>;

inline int total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

/// Lexicographic ranking of all n-tuples of non-negative integers with sum ≤ max_total.
class TupleIndex {
 public:
  TupleIndex(int n, int max_total) : n_(n), max_total_(max_total) {
    // count_[k][s] = number of k-tuples with sum ≤ s
    count_.assign(static_cast<std::size_t>(n + 1),
                  std::vector<std::uint64_t>(static_cast<std::size_t>(max_total + 1), 1));
    for (int k = 1; k <= n; ++k)
      for (int s = 0; s <= max_total; ++s)
        count_[k][s] = count_[k - 1][s] + (s > 0 ? count_[k][s - 1] : 0);
    // cum_[k][s][v] = Σ_{u<v} count(k, s − u)
    cum_.resize(static_cast<std::size_t>(n + 1));
    for (int k = 0; k <= n; ++k) {
      cum_[k].resize(static_cast<std::size_t>(max_total + 1));
      for (int s = 0; s <= max_total; ++s) {
        auto& row = cum_[k][s];
        row.assign(static_cast<std::size_t>(s + 2), 0);
        for (int v = 0; v <= s; ++v) row[v + 1] = row[v] + count_[k][s - v];
      }
    }
  }

  int n() const { return n_; }
  int max_total() const { return max_total_; }
  std::size_t size() const { return static_cast<std::size_t>(count_[n_][max_total_]); }

  /// Number of k-tuples with sum ≤ s.
  std::uint64_t count(int k, int s) const {
    return s < 0 ? 0 : count_[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)];
  }

  std::size_t rank(const int* t) const {
    std::uint64_t r = 0;
    int budget = max_total_;
    for (int p = 0; p < n_; ++p) {
      r += cum_[static_cast<std::size_t>(n_ - p - 1)][static_cast<std::size_t>(budget)][static_cast<std::size_t>(t[p])];
      budget -= t[p];
    }
    return static_cast<std::size_t>(r);
  }
  std::size_t rank(const Monomial& t) const { return rank(t.data()); }

  /// Calls fn(tuple, rank) for every tuple in rank order without materializing the list.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    Monomial cur(static_cast<std::size_t>(n_), 0);
    std::size_t r = 0;
    visit_rec(0, max_total_, cur, r, fn);
  }

  /// All tuples in rank order.
  std::vector<Monomial> enumerate() const {
    std::vector<Monomial> out;
    out.reserve(size());
    Monomial cur(static_cast<std::size_t>(n_), 0);
    enumerate_rec(0, max_total_, cur, out);
    return out;
  }

 private:
  template <typename Fn>
  void visit_rec(int p, int budget, Monomial& cur, std::size_t& r, Fn& fn) const {
    if (p == n_) {
      fn(static_cast<const Monomial&>(cur), r++);
      return;
    }
    for (int v = 0; v <= budget; ++v) {
      cur[static_cast<std::size_t>(p)] = v;
      visit_rec(p + 1, budget - v, cur, r, fn);
    }
    cur[static_cast<std::size_t>(p)] = 0;
  }

  void enumerate_rec(int p, int budget, Monomial& cur, std::vector<Monomial>& out) const {
    if (p == n_) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= budget; ++v) {
      cur[static_cast<std::size_t>(p)] = v;
      enumerate_rec(p + 1, budget - v, cur, out);
    }
    cur[static_cast<std::size_t>(p)] = 0;
  }

  int n_;
  int max_total_;
  std::vector<std::vector<std::uint64_t>> count_;
  std::vector<std::vector<std::vector<std::uint64_t>>> cum_;
};

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// ∏ m_i!
inline double multi_factorial(const Monomial& m) {
  double f = 1.0;
  for (int k : m) f *= factorial(k);
  return f;
}

}  // namespace bellforge
