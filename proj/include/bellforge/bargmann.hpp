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

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bellforge/circuit.hpp"
#include "bellforge/config.hpp"
#include "bellforge/error.hpp"
#include "bellforge/linalg.hpp"
#include "bellforge/polynomial.hpp"

namespace bellforge {

/// Terminal detection: one photon in each detected mode, vacuum in each
/// vacuum mode, the output modes left unmeasured.
struct DetectionPattern {
  std::vector<int> detected;
  std::vector<int> vacuum;
  std::vector<int> outputs;

  /// Outputs default to the first min(4, n − M) undetected modes; the rest are measured in vacuum.
  static DetectionPattern make(int n_modes, std::vector<int> detected, std::optional<std::vector<int>> outputs = {}) {
    DetectionPattern p;
    p.detected = std::move(detected);
    const std::set<int> det(p.detected.begin(), p.detected.end());
    if (outputs) {
      p.outputs = *outputs;
    } else {
      for (int m = 0; m < n_modes && p.outputs.size() < 4; ++m)
        if (!det.contains(m)) p.outputs.push_back(m);
    }
    const std::set<int> out(p.outputs.begin(), p.outputs.end());
    for (int m = 0; m < n_modes; ++m)
      if (!det.contains(m) && !out.contains(m)) p.vacuum.push_back(m);
    p.validate(n_modes);
    return p;
  }

  int n_modes() const { return static_cast<int>(detected.size() + vacuum.size() + outputs.size()); }

  /// The three sets must be disjoint and cover 0..n_modes-1.
  void validate(int n_modes) const {
    std::vector<int> seen(static_cast<std::size_t>(std::max(n_modes, 0)), 0);
    auto mark = [&](const std::vector<int>& v, const char* what) {
      for (int m : v) {
        if (m < 0 || m >= n_modes) {
          throw Error(ErrorCode::PatternModeClash, std::string(what) + " mode " + std::to_string(m) + " out of range");
        }
        if (seen[static_cast<std::size_t>(m)]++) {
          throw Error(ErrorCode::PatternModeClash, "mode " + std::to_string(m) + " appears twice in the pattern");
        }
      }
    };
    mark(detected, "detected");
    mark(vacuum, "vacuum");
    mark(outputs, "output");
    for (int m = 0; m < n_modes; ++m) {
      if (!seen[static_cast<std::size_t>(m)]) {
        throw Error(ErrorCode::PatternModeClash, "mode " + std::to_string(m) + " is not assigned by the pattern");
      }
    }
  }

  friend bool operator==(const DetectionPattern&, const DetectionPattern&) = default;
};

/// Post-selected state poly(α) · exp(αᵀ residual_B α + residual_linalgᵀ α) over the output modes.
struct ConditionalState {
  BargmannPolynomial poly;
  ComplexMatrix residual_B;
  /// Zero for states generated by quadratic Hamiltonians.
  ComplexVector residual_linear;
  DetectionPattern pattern;

  /// Same prefactor kept as a sum over partial matchings, each term a constant
  /// times a product of rows of `linear_forms`. Filled only for purely quadratic
  /// exponents with few detections; lets the norm be evaluated without expanding.
  struct MatchingTerm {
    Complex coef;
    std::vector<int> singles;
  };
  std::vector<MatchingTerm> matching_terms;
  ComplexMatrix linear_forms;

  int n_outputs() const { return poly.n_modes(); }
  bool has_linear() const { return residual_linear.size() > 0 && residual_linear.squaredNorm() > 0.0; }
};

namespace detail {

inline ComplexMatrix submatrix(const ComplexMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  ComplexMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(rows[r], cols[c]);
  return out;
}

/// ∂ of the exponent with respect to detected mode s, restricted to α' = 0:
/// d_s + 2 Σ_{i ∈ outputs} B_si α_i.
inline BargmannPolynomial detection_linear_form(const ComplexMatrix& b, const ComplexVector& d,
                                                const std::vector<int>& outputs, int s) {
  ComplexVector coeffs(static_cast<Eigen::Index>(outputs.size()));
  for (std::size_t i = 0; i < outputs.size(); ++i) coeffs(static_cast<Eigen::Index>(i)) = 2.0 * b(s, outputs[i]);
  const Complex offset = d.size() > 0 ? d(s) : Complex{0.0, 0.0};
  return BargmannPolynomial::linear(coeffs, offset);
}

}  // namespace detail

/// ∂_{s1}…∂_{sM} [scale · exp(αᵀBα + dᵀα)] at α' = 0, for an arbitrary exponent.
///
/// Each detected index is either paired with another detected index (factor 2B_ab)
/// or left to the linear form d_a + 2(Bα)_a; the sum over partial matchings is
/// accumulated by a memoized recursion over the remaining-detections bitmask.
inline ConditionalState postselect_exponential(const ComplexMatrix& b, const ComplexVector& d, Complex scale,
                                               const DetectionPattern& pattern,
                                               const Config& cfg = default_config()) {
  const int n = static_cast<int>(b.rows());
  pattern.validate(n);
  const int m = static_cast<int>(pattern.detected.size());
  if (m > cfg.max_detections) {
    throw Error(ErrorCode::TooManyDetections,
                std::to_string(m) + " detections exceed the configured limit of " + std::to_string(cfg.max_detections));
  }
  const int n_out = static_cast<int>(pattern.outputs.size());

  std::vector<BargmannPolynomial> linear;
  linear.reserve(static_cast<std::size_t>(m));
  for (int s : pattern.detected) linear.push_back(detail::detection_linear_form(b, d, pattern.outputs, s));

  const std::uint32_t full = m == 0 ? 0u : static_cast<std::uint32_t>((1u << m) - 1u);
  std::vector<std::optional<BargmannPolynomial>> memo(static_cast<std::size_t>(full) + 1);
  auto solve = [&](auto&& self, std::uint32_t mask) -> const BargmannPolynomial& {
    auto& slot = memo[mask];
    if (slot) return *slot;
    if (mask == 0) {
      slot = BargmannPolynomial::constant(n_out, 1.0);
      return *slot;
    }
    const int a = std::countr_zero(mask);
    const std::uint32_t rest = mask & ~(1u << a);
    BargmannPolynomial acc = linear[static_cast<std::size_t>(a)] * self(self, rest);
    for (int bidx = a + 1; bidx < m; ++bidx) {
      if (!(rest & (1u << bidx))) continue;
      const Complex pair = 2.0 * b(pattern.detected[static_cast<std::size_t>(a)], pattern.detected[static_cast<std::size_t>(bidx)]);
      acc += self(self, rest & ~(1u << bidx)) * pair;
    }
    slot = std::move(acc);
    return *slot;
  };

  ConditionalState out;
  const bool quadratic_only = d.size() == 0 || d.squaredNorm() == 0.0;
  if (quadratic_only && m <= 6) {
    out.linear_forms = ComplexMatrix::Zero(m, n_out);
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < n_out; ++i)
        out.linear_forms(a, i) = 2.0 * b(pattern.detected[static_cast<std::size_t>(a)], pattern.outputs[static_cast<std::size_t>(i)]);
    std::vector<int> singles;
    auto enumerate = [&](auto&& self, std::uint32_t mask, Complex coef) -> void {
      if (mask == 0) {
        out.matching_terms.push_back({coef * scale, singles});
        return;
      }
      const int a = std::countr_zero(mask);
      const std::uint32_t rest = mask & ~(1u << a);
      singles.push_back(a);
      self(self, rest, coef);
      singles.pop_back();
      for (std::uint32_t r = rest; r != 0; r &= r - 1) {
        const int c = std::countr_zero(r);
        const Complex pair = 2.0 * b(pattern.detected[static_cast<std::size_t>(a)], pattern.detected[static_cast<std::size_t>(c)]);
        if (pair != Complex{0.0, 0.0}) self(self, rest & ~(1u << c), coef * pair);
      }
    };
    enumerate(enumerate, full, 1.0);
  }
  out.poly = solve(solve, full) * scale;
  out.residual_B = detail::submatrix(b, pattern.outputs, pattern.outputs);
  out.residual_linear = ComplexVector::Zero(n_out);
  if (d.size() > 0)
    for (int i = 0; i < n_out; ++i) out.residual_linear(i) = d(pattern.outputs[static_cast<std::size_t>(i)]);
  out.pattern = pattern;
  return out;
}

/// Detection-conditioned state of a Gaussian ψ = exp(αᵀBα).
inline ConditionalState postselect(const GaussianBargmann& state, const DetectionPattern& pattern,
                                   const Config& cfg = default_config()) {
  return postselect_exponential(state.B, ComplexVector(), 1.0, pattern, cfg);
}

enum class FourPhotonTermKind { Pairing, PairingCross, Quartic };

/// One of the ten structural contributions for four detections: B·B pairings,
/// B·X·X cross terms and the X·X·X·X term, with X_a = Σ_{i ∈ outputs} B_ai α_i.
struct FourPhotonTerm {
  FourPhotonTermKind kind;
  std::vector<std::array<int, 2>> pairs;  // detected modes paired through B
  std::vector<int> singles;               // detected modes contributing X
  BargmannPolynomial poly;                // exact Wick coefficient included
};

inline std::vector<FourPhotonTerm> four_photon_terms(const GaussianBargmann& state, const DetectionPattern& pattern,
                                                     const Config& cfg = default_config()) {
  pattern.validate(static_cast<int>(state.n_modes()));
  if (pattern.detected.size() != 4) {
    throw Error(ErrorCode::WrongDetectionCount,
                "four_photon_terms needs exactly 4 detected modes, got " + std::to_string(pattern.detected.size()));
  }
  (void)cfg;
  const auto& s = pattern.detected;
  const int n_out = static_cast<int>(pattern.outputs.size());
  const ComplexMatrix& b = state.B;
  std::array<BargmannPolynomial, 4> x;
  for (int k = 0; k < 4; ++k) x[static_cast<std::size_t>(k)] = detail::detection_linear_form(b, ComplexVector(), pattern.outputs, s[static_cast<std::size_t>(k)]);
  auto pair_coeff = [&](int p, int q) { return 2.0 * b(s[static_cast<std::size_t>(p)], s[static_cast<std::size_t>(q)]); };

  std::vector<FourPhotonTerm> terms;
  const std::array<std::array<int, 4>, 3> pairings{{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
  for (const auto& pr : pairings) {
    terms.push_back({FourPhotonTermKind::Pairing,
                     {{s[pr[0]], s[pr[1]]}, {s[pr[2]], s[pr[3]]}},
                     {},
                     BargmannPolynomial::constant(n_out, pair_coeff(pr[0], pr[1]) * pair_coeff(pr[2], pr[3]))});
  }
  for (int p = 0; p < 4; ++p) {
    for (int q = p + 1; q < 4; ++q) {
      std::vector<int> rest;
      for (int k = 0; k < 4; ++k)
        if (k != p && k != q) rest.push_back(k);
      terms.push_back({FourPhotonTermKind::PairingCross,
                       {{s[static_cast<std::size_t>(p)], s[static_cast<std::size_t>(q)]}},
                       {s[static_cast<std::size_t>(rest[0])], s[static_cast<std::size_t>(rest[1])]},
                       x[static_cast<std::size_t>(rest[0])] * x[static_cast<std::size_t>(rest[1])] * pair_coeff(p, q)});
    }
  }
  terms.push_back({FourPhotonTermKind::Quartic, {}, {s[0], s[1], s[2], s[3]}, x[0] * x[1] * x[2] * x[3]});
  return terms;
}

namespace detail {

struct GaussianMoments {
  ComplexMatrix aa;       // ⟨a_i a_j⟩ − μ_i μ_j
  ComplexMatrix adag_a;   // ⟨a†_i a_j⟩ − μ̄_i μ_j
  ComplexVector mean;     // μ = ⟨a⟩
  double log_norm_sq = 0; // log ⟨G|G⟩
};

/// Moments of the normalized state G/‖G‖ with G = exp(αᵀAα + dᵀα); with K = 2A,
/// connected ⟨aa⟩ = (I − KK̄)⁻¹K, ⟨a†a⟩ = (I − K̄K)⁻¹ − I and μ = (I − KK̄)⁻¹(d + K d̄).
inline GaussianMoments gaussian_moments(const ComplexMatrix& a, const ComplexVector& d) {
  const Eigen::Index n = a.rows();
  const ComplexMatrix k = 2.0 * a;
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix kkbar = k * k.conjugate();
  const ComplexMatrix kbark = k.conjugate() * k;
  Eigen::PartialPivLU<ComplexMatrix> lu1(id - kkbar);
  Eigen::PartialPivLU<ComplexMatrix> lu2(id - kbark);
  GaussianMoments m;
  m.aa = lu1.solve(k);
  m.adag_a = lu2.solve(id) - id;
  const ComplexVector dd = d.size() == n ? d : ComplexVector::Zero(n);
  m.mean = lu1.solve(dd + k * dd.conjugate());
  const Eigen::VectorXcd ev = (id - kbark).eigenvalues();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) log_det += std::log(std::abs(ev(i)));
  const Complex quad = (dd.adjoint() * lu1.solve(dd))(0, 0) +
                       0.5 * (dd.transpose() * lu2.solve(k.conjugate() * dd))(0, 0) +
                       0.5 * std::conj((dd.transpose() * lu2.solve(k.conjugate() * dd))(0, 0));
  m.log_norm_sq = -0.5 * log_det + quad.real();
  return m;
}

struct LadderOp {
  bool dagger;
  int mode;
};

/// Wick expansion of ⟨x_1 … x_L⟩ (operator order preserved) for a Gaussian state.
inline Complex ordered_expectation(const std::vector<LadderOp>& ops, const GaussianMoments& g, bool with_mean,
                                   std::vector<Complex>& memo, std::vector<char>& known) {
  const std::size_t len = ops.size();
  const std::uint32_t full = static_cast<std::uint32_t>((1u << len) - 1u);
  memo.assign(static_cast<std::size_t>(full) + 1, 0.0);
  known.assign(static_cast<std::size_t>(full) + 1, 0);
  auto contract = [&](const LadderOp& x, const LadderOp& y) -> Complex {
    if (!x.dagger && !y.dagger) return g.aa(x.mode, y.mode);
    if (x.dagger && y.dagger) return std::conj(g.aa(x.mode, y.mode));
    if (!x.dagger && y.dagger) return (x.mode == y.mode ? 1.0 : 0.0) + g.adag_a(y.mode, x.mode);
    return g.adag_a(x.mode, y.mode);
  };
  auto mean = [&](const LadderOp& x) -> Complex { return x.dagger ? std::conj(g.mean(x.mode)) : g.mean(x.mode); };
  auto solve = [&](auto&& self, std::uint32_t mask) -> Complex {
    if (mask == 0) return 1.0;
    if (known[mask]) return memo[mask];
    const int first = std::countr_zero(mask);
    const std::uint32_t rest = mask & ~(1u << first);
    Complex acc = 0.0;
    if (with_mean) acc += mean(ops[static_cast<std::size_t>(first)]) * self(self, rest);
    for (std::uint32_t r = rest; r != 0; r &= r - 1) {
      const int second = std::countr_zero(r);
      acc += contract(ops[static_cast<std::size_t>(first)], ops[static_cast<std::size_t>(second)]) *
             self(self, rest & ~(1u << second));
    }
    known[mask] = 1;
    memo[mask] = acc;
    return acc;
  };
  if (!with_mean && (len % 2) == 1) return 0.0;
  return solve(solve, full);
}

}  // namespace detail

/// Largest Takagi value of 2·residual_B.
inline double residual_xi(const ConditionalState& c) {
  if (c.residual_B.size() == 0) return 0.0;
  return Eigen::JacobiSVD<ComplexMatrix>(2.0 * c.residual_B).singularValues()(0);
}

/// Truncated expansion of the conditional state over the output modes.
inline TruncatedSeries conditional_series(const ConditionalState& c, int max_degree) {
  return expand_truncated(c.poly, c.residual_B, c.residual_linear, max_degree);
}

/// Upper bound on the weight ‖c_{>D}‖² discarded by truncating at total degree D.
///
/// The exponential's sector-n weight is bounded by C(k+N−1, N−1) λ^{2k} (n = 2k) for a
/// pure quadratic exponent and by s^n/n! (s = ‖d‖²) for a pure linear one; raising
/// by α^m multiplies a sector-n norm by at most (n+|m|)^{|m|/2}.
inline double truncation_tail_bound(const ConditionalState& c, int max_degree) {
  const int n_out = c.n_outputs();
  if (n_out == 0 || c.poly.is_zero()) return 0.0;
  const bool linear = c.has_linear();
  const bool quadratic = c.residual_B.size() > 0 && c.residual_B.squaredNorm() > 0.0;
  if (linear && quadratic) {
    throw Error(ErrorCode::ParameterOutOfRange, "tail bound needs a purely quadratic or purely linear exponent");
  }
  if (!linear && !quadratic) {
    return c.poly.max_degree() > max_degree ? std::numeric_limits<double>::infinity() : 0.0;
  }
  const double lambda = quadratic ? residual_xi(c) : 0.0;
  const double s = linear ? c.residual_linear.squaredNorm() : 0.0;
  if (quadratic && lambda >= 1.0) return std::numeric_limits<double>::infinity();

  // log of the sector-n weight bound of the exponential
  auto log_weight = [&](int n) -> double {
    if (quadratic) {
      if (n % 2) return -std::numeric_limits<double>::infinity();
      const int k = n / 2;
      const double log_binom = std::lgamma(k + n_out) - std::lgamma(k + 1.0) - std::lgamma(static_cast<double>(n_out));
      return log_binom + 2.0 * k * std::log(lambda);
    }
    return n * std::log(s) - std::lgamma(n + 1.0);
  };
  auto inner = [&](int q) -> double {
    double acc = 0.0;
    double prev = 0.0;
    for (int n = std::max(0, max_degree - q + 1); n < max_degree + 100000; ++n) {
      const double lw = log_weight(n);
      if (!std::isfinite(lw)) continue;
      const double term = std::exp(lw + q * std::log(static_cast<double>(n + q)));
      acc += term;
      if (prev > 0.0) {
        const double ratio = term / prev;
        if (ratio < 1.0 && term * ratio / (1.0 - ratio) <= 1e-17 * acc) {
          acc += term * ratio / (1.0 - ratio);
          break;
        }
      }
      prev = term;
      if (acc == 0.0 && n > max_degree + 4) break;
    }
    return acc;
  };
  double norm_bound = 0.0;
  for (const auto& [m, coef] : c.poly.terms()) norm_bound += std::abs(coef) * std::sqrt(inner(total_degree(m)));
  return norm_bound * norm_bound;
}

namespace detail {

/// ⟨c|c⟩ from the matching-sum form: each pair of terms is a vacuum-free Gaussian
/// expectation of annihilators (bra) followed by creators (ket), contracted with
/// P_ab = ⟨(w̄_a·a)(w̄_b·a)⟩ and Q_ab = ⟨(w̄_a·a)(w_b·a†)⟩.
inline double matching_norm_squared(const ConditionalState& c, const GaussianMoments& g) {
  const ComplexMatrix& w = c.linear_forms;
  const Eigen::Index n = w.cols();
  const ComplexMatrix wbar = w.conjugate();
  const ComplexMatrix p = wbar * g.aa * wbar.transpose();
  const ComplexMatrix q = wbar * (ComplexMatrix::Identity(n, n) + g.adag_a.transpose()) * w.transpose();
  std::vector<std::pair<bool, int>> ops;  // (is_ket, form)
  std::vector<Complex> memo;
  std::vector<char> known;
  auto contract = [&](const std::pair<bool, int>& x, const std::pair<bool, int>& y) -> Complex {
    if (!x.first && !y.first) return p(x.second, y.second);
    if (x.first && y.first) return std::conj(p(x.second, y.second));
    return q(x.second, y.second);  // bra operators always precede ket operators
  };
  Complex acc = 0.0;
  for (std::size_t t1 = 0; t1 < c.matching_terms.size(); ++t1) {
    for (std::size_t t2 = t1; t2 < c.matching_terms.size(); ++t2) {
      const auto& a = c.matching_terms[t1];
      const auto& bterm = c.matching_terms[t2];
      const std::size_t len = a.singles.size() + bterm.singles.size();
      if (len % 2) continue;
      ops.clear();
      for (int f : a.singles) ops.emplace_back(false, f);
      for (int f : bterm.singles) ops.emplace_back(true, f);
      const std::uint32_t full = static_cast<std::uint32_t>((1u << len) - 1u);
      memo.assign(static_cast<std::size_t>(full) + 1, 0.0);
      known.assign(static_cast<std::size_t>(full) + 1, 0);
      auto solve = [&](auto&& self, std::uint32_t mask) -> Complex {
        if (mask == 0) return 1.0;
        if (known[mask]) return memo[mask];
        const int first = std::countr_zero(mask);
        const std::uint32_t rest = mask & ~(1u << first);
        Complex s = 0.0;
        for (std::uint32_t r = rest; r != 0; r &= r - 1) {
          const int second = std::countr_zero(r);
          s += contract(ops[static_cast<std::size_t>(first)], ops[static_cast<std::size_t>(second)]) *
               self(self, rest & ~(1u << second));
        }
        known[mask] = 1;
        memo[mask] = s;
        return s;
      };
      const Complex v = std::conj(a.coef) * bterm.coef * solve(solve, full);
      acc += t1 == t2 ? v : 2.0 * Complex(v.real(), 0.0);
    }
  }
  return acc.real() * std::exp(g.log_norm_sq);
}

}  // namespace detail

/// ⟨c|c⟩. Exact (Gaussian Wick expansion) when the matching-sum form is present or
/// the prefactor has degree ≤ 6, otherwise a truncated Fock sum carried to relative
/// accuracy 1e-15.
inline double conditional_norm_squared(const ConditionalState& c) {
  if (c.poly.is_zero()) return 0.0;
  const int n_out = c.n_outputs();
  if (n_out == 0) return std::norm(c.poly.coefficient({}));
  const int degree = c.poly.max_degree();
  if (!c.matching_terms.empty() && !c.has_linear()) {
    return detail::matching_norm_squared(c, detail::gaussian_moments(c.residual_B, c.residual_linear));
  }
  if (degree <= 6) {
    const detail::GaussianMoments g = detail::gaussian_moments(c.residual_B, c.residual_linear);
    const bool with_mean = c.has_linear();
    std::vector<Complex> memo;
    std::vector<char> known;
    std::vector<detail::LadderOp> ops;
    Complex acc = 0.0;
    for (const auto& [m1, c1] : c.poly.terms()) {
      for (const auto& [m2, c2] : c.poly.terms()) {
        const int len = total_degree(m1) + total_degree(m2);
        if (!with_mean && (len % 2)) continue;
        ops.clear();
        for (int i = 0; i < n_out; ++i)
          for (int r = 0; r < m1[static_cast<std::size_t>(i)]; ++r) ops.push_back({false, i});
        for (int i = 0; i < n_out; ++i)
          for (int r = 0; r < m2[static_cast<std::size_t>(i)]; ++r) ops.push_back({true, i});
        acc += std::conj(c1) * c2 * detail::ordered_expectation(ops, g, with_mean, memo, known);
      }
    }
    return acc.real() * std::exp(g.log_norm_sq);
  }
  int cutoff = degree + 8;
  for (;;) {
    const TruncatedSeries series = conditional_series(c, cutoff);
    const double kept = series.fock_norm_squared();
    const double tail = truncation_tail_bound(c, cutoff);
    if (tail <= 1e-15 * kept || cutoff > degree + 400) return kept;
    cutoff += 8;
  }
}

struct ProbabilityEstimate {
  double value = 0.0;
  /// Certified bound on the probability lost to Fock truncation.
  double truncation_bound = 0.0;
};

/// Probability of the detection pattern: ‖conditional state‖² / ⟨ψ|ψ⟩, summed
/// over output Fock states up to `cutoff` total photons.
inline ProbabilityEstimate success_probability(const GaussianBargmann& state, const DetectionPattern& pattern,
                                               int cutoff, const Config& cfg = default_config()) {
  const ConditionalState c = postselect(state, pattern, cfg);
  if (cutoff < c.poly.max_degree() || cutoff < 0) {
    throw Error(ErrorCode::CutoffTooSmall, "cutoff " + std::to_string(cutoff) + " is below the conditional degree " +
                                               std::to_string(c.poly.max_degree()));
  }
  if (c.poly.is_zero()) return {0.0, 0.0};
  const double norm_sq = state.norm_squared();
  if (c.n_outputs() == 0) return {std::norm(c.poly.coefficient({})) / norm_sq, 0.0};
  const TruncatedSeries series = conditional_series(c, cutoff);
  return {series.fock_norm_squared() / norm_sq, truncation_tail_bound(c, cutoff) / norm_sq};
}

}  // namespace bellforge
