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

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "bellforge/linalg.hpp"
#include "bellforge/multi_index.hpp"

namespace bellforge {

/// Sparse polynomial in the Bargmann variables α_i (α_i stands for a†_i).
///
/// The Fock amplitude of the monomial α^m is coefficient × √(∏ m_i!).
/// Exact zeros are never stored.
class BargmannPolynomial {
 public:
  using TermMap = std::map<Monomial, Complex>;

  explicit BargmannPolynomial(int n_modes = 0) : n_modes_(n_modes) {}

  static BargmannPolynomial constant(int n_modes, Complex value) {
    BargmannPolynomial p(n_modes);
    p.add(Monomial(static_cast<std::size_t>(n_modes), 0), value);
    return p;
  }

  /// Σ_i coeffs_i α_i + offset
  static BargmannPolynomial linear(const ComplexVector& coeffs, Complex offset = 0.0) {
    const int n = static_cast<int>(coeffs.size());
    BargmannPolynomial p = constant(n, offset);
    for (int i = 0; i < n; ++i) {
      Monomial m(static_cast<std::size_t>(n), 0);
      m[static_cast<std::size_t>(i)] = 1;
      p.add(m, coeffs(i));
    }
    return p;
  }

  /// α_i α_j
  static BargmannPolynomial pair(int n_modes, int i, int j, Complex value = 1.0) {
    BargmannPolynomial p(n_modes);
    Monomial m(static_cast<std::size_t>(n_modes), 0);
    ++m[static_cast<std::size_t>(i)];
    ++m[static_cast<std::size_t>(j)];
    p.add(m, value);
    return p;
  }

  int n_modes() const { return n_modes_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const Monomial& m, Complex value) {
    if (static_cast<int>(m.size()) != n_modes_) {
      throw std::invalid_argument("monomial arity does not match polynomial");
    }
    if (value == Complex{0.0, 0.0}) return;
    auto [it, inserted] = terms_.try_emplace(m, value);
    if (!inserted) {
      it->second += value;
      if (it->second == Complex{0.0, 0.0}) terms_.erase(it);
    }
  }

  Complex coefficient(const Monomial& m) const {
    const auto it = terms_.find(m);
    return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
  }

  /// -1 for the zero polynomial.
  int max_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
  }

  BargmannPolynomial homogeneous_part(int degree) const {
    BargmannPolynomial out(n_modes_);
    for (const auto& [m, c] : terms_)
      if (total_degree(m) == degree) out.terms_.emplace(m, c);
    return out;
  }

  Complex fock_amplitude(const Monomial& m) const {
    return coefficient(m) * std::sqrt(multi_factorial(m));
  }

  double fock_norm_squared() const {
    double s = 0.0;
    for (const auto& [m, c] : terms_) s += std::norm(c) * multi_factorial(m);
    return s;
  }

  BargmannPolynomial& operator+=(const BargmannPolynomial& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }

  BargmannPolynomial& operator*=(Complex s) {
    if (s == Complex{0.0, 0.0}) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend BargmannPolynomial operator+(BargmannPolynomial a, const BargmannPolynomial& b) {
    a += b;
    return a;
  }
  friend BargmannPolynomial operator*(BargmannPolynomial a, Complex s) {
    a *= s;
    return a;
  }
  friend BargmannPolynomial operator*(Complex s, BargmannPolynomial a) {
    a *= s;
    return a;
  }

  friend BargmannPolynomial operator*(const BargmannPolynomial& a, const BargmannPolynomial& b) {
    a.check_arity(b);
    BargmannPolynomial out(a.n_modes_);
    Monomial m(static_cast<std::size_t>(a.n_modes_));
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        for (std::size_t k = 0; k < m.size(); ++k) m[k] = ma[k] + mb[k];
        out.add(m, ca * cb);
      }
    }
    return out;
  }

  /// Replaces every α_j by Σ_k W_kj α_k (a photon in mode j is sent to mode k
  /// with amplitude W_kj).
  BargmannPolynomial substitute(const ComplexMatrix& w) const {
    if (w.rows() != n_modes_ || w.cols() != n_modes_) {
      throw std::invalid_argument("substitution matrix has the wrong shape");
    }
    std::vector<BargmannPolynomial> images;
    images.reserve(static_cast<std::size_t>(n_modes_));
    for (int j = 0; j < n_modes_; ++j) images.push_back(linear(w.col(j)));
    BargmannPolynomial out(n_modes_);
    for (const auto& [m, c] : terms_) {
      BargmannPolynomial term = constant(n_modes_, c);
      for (int j = 0; j < n_modes_; ++j)
        for (int p = 0; p < m[static_cast<std::size_t>(j)]; ++p) term = term * images[j];
      out += term;
    }
    return out;
  }

  friend bool operator==(const BargmannPolynomial&, const BargmannPolynomial&) = default;

 private:
  void check_arity(const BargmannPolynomial& o) const {
    if (o.n_modes_ != n_modes_) throw std::invalid_argument("polynomial arity mismatch");
  }

  int n_modes_;
  TermMap terms_;
};

/// Dense coefficients of a power series in n variables truncated at total degree D.
class TruncatedSeries {
 public:
  TruncatedSeries(int n, int max_degree)
      : index_(n, max_degree), monomials_(index_.enumerate()), coeffs_(index_.size(), 0.0) {
    raise_.assign(monomials_.size() * static_cast<std::size_t>(n), -1);
    for (std::size_t k = 0; k < monomials_.size(); ++k) {
      Monomial m = monomials_[k];
      if (total_degree(m) == max_degree) continue;
      for (int i = 0; i < n; ++i) {
        ++m[static_cast<std::size_t>(i)];
        raise_[k * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] =
            static_cast<long>(index_.rank(m));
        --m[static_cast<std::size_t>(i)];
      }
    }
  }

  int n() const { return index_.n(); }
  int max_degree() const { return index_.max_total(); }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  std::vector<Complex>& coeffs() { return coeffs_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  std::size_t rank(const Monomial& m) const { return index_.rank(m); }

  Complex coefficient(const Monomial& m) const {
    return total_degree(m) > max_degree() ? Complex{0.0, 0.0} : coeffs_[index_.rank(m)];
  }

  /// this ← this · (Σ_ij A_ij α_i α_j + Σ_i d_i α_i) / divisor, truncated.
  void multiply_by_exponent_terms(const ComplexMatrix& a, const ComplexVector& d, double divisor) {
    const int nv = n();
    std::vector<Complex> out(coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      const Complex c = coeffs_[k];
      if (c == Complex{0.0, 0.0}) continue;
      const Complex s = c / divisor;
      for (int i = 0; i < nv; ++i) {
        const long ki = raise_[k * static_cast<std::size_t>(nv) + static_cast<std::size_t>(i)];
        if (ki < 0) break;
        if (d.size() > 0 && d(i) != Complex{0.0, 0.0}) out[static_cast<std::size_t>(ki)] += s * d(i);
        if (a.size() == 0) continue;
        for (int j = i; j < nv; ++j) {
          const long kij =
              raise_[static_cast<std::size_t>(ki) * static_cast<std::size_t>(nv) + static_cast<std::size_t>(j)];
          if (kij < 0) break;
          const Complex aij = i == j ? a(i, i) : a(i, j) + a(j, i);
          out[static_cast<std::size_t>(kij)] += s * aij;
        }
      }
    }
    coeffs_.swap(out);
  }

  /// this ← this · p, truncated.
  void multiply_by(const BargmannPolynomial& p) {
    std::vector<Complex> out(coeffs_.size(), 0.0);
    const int md = max_degree();
    for (const auto& [m, c] : p.terms()) {
      const int dm = total_degree(m);
      for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] == Complex{0.0, 0.0}) continue;
        if (total_degree(monomials_[k]) + dm > md) continue;
        std::size_t idx = k;
        for (int i = 0; i < n(); ++i)
          for (int r = 0; r < m[static_cast<std::size_t>(i)]; ++r)
            idx = static_cast<std::size_t>(raise_[idx * static_cast<std::size_t>(n()) + static_cast<std::size_t>(i)]);
        out[idx] += coeffs_[k] * c;
      }
    }
    coeffs_.swap(out);
  }

  /// Σ |coef|² m! over the retained monomials.
  double fock_norm_squared() const {
    double s = 0.0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
      if (coeffs_[k] != Complex{0.0, 0.0}) s += std::norm(coeffs_[k]) * multi_factorial(monomials_[k]);
    return s;
  }

  Complex fock_amplitude(std::size_t k) const { return coeffs_[k] * std::sqrt(multi_factorial(monomials_[k])); }

 private:
  TupleIndex index_;
  std::vector<Monomial> monomials_;
  std::vector<Complex> coeffs_;
  std::vector<long> raise_;
};

/// p(α) · exp(αᵀAα + dᵀα), truncated at total degree max_degree.
inline TruncatedSeries expand_truncated(const BargmannPolynomial& p, const ComplexMatrix& a,
                                        const ComplexVector& d, int max_degree) {
  const int n = p.n_modes();
  TruncatedSeries term(n, max_degree);
  term.coeffs()[0] = 1.0;
  TruncatedSeries sum = term;
  const bool has_linear = d.size() > 0 && d.squaredNorm() > 0.0;
  const bool has_quadratic = a.size() > 0 && a.squaredNorm() > 0.0;
  if (has_linear || has_quadratic) {
    for (int k = 1; k <= max_degree; ++k) {
      term.multiply_by_exponent_terms(a, d, static_cast<double>(k));
      for (std::size_t i = 0; i < sum.size(); ++i) sum.coeffs()[i] += term.coeffs()[i];
    }
  }
  sum.multiply_by(p);
  return sum;
}

}  // namespace bellforge
