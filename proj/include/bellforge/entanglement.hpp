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

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/SVD>

#include "bellforge/bargmann.hpp"
#include "bellforge/config.hpp"
#include "bellforge/error.hpp"
#include "bellforge/polynomial.hpp"

namespace bellforge {

enum class Side { A, B };
/// ↕ and ↔
enum class Polarisation { V, H };

struct ModeRole {
  Side side;
  Polarisation pol;
  friend bool operator==(const ModeRole&, const ModeRole&) = default;
};

enum class BellState { PsiMinus, PsiPlus, PhiMinus, PhiPlus };

inline std::string_view to_string(BellState s) {
  switch (s) {
    case BellState::PsiMinus: return "psi-minus";
    case BellState::PsiPlus: return "psi-plus";
    case BellState::PhiMinus: return "phi-minus";
    case BellState::PhiPlus: return "phi-plus";
  }
  return "unknown";
}

inline BellState bell_state_from_string(std::string_view s) {
  for (BellState b : {BellState::PsiMinus, BellState::PsiPlus, BellState::PhiMinus, BellState::PhiPlus})
    if (to_string(b) == s) return b;
  throw Error(ErrorCode::SchemaViolation, "unknown Bell target '" + std::string(s) +
                                              "' (expected psi-minus, psi-plus, phi-minus or phi-plus)");
}

/// Output modes (0, 1, 2, 3) = (A↕, B↔, A↔, B↕): Ψ⁻ is then (α₀α₁ − α₂α₃)/√2
/// with sides A = {0, 2}, B = {1, 3}.
inline std::array<ModeRole, 4> default_labeling() {
  return {ModeRole{Side::A, Polarisation::V}, ModeRole{Side::B, Polarisation::H},
          ModeRole{Side::A, Polarisation::H}, ModeRole{Side::B, Polarisation::V}};
}

struct BellTarget {
  std::array<ModeRole, 4> labeling = default_labeling();
  BellState state = BellState::PsiMinus;

  /// Output index carrying the given side and polarisation.
  int mode(Side side, Polarisation pol) const {
    for (int k = 0; k < 4; ++k)
      if (labeling[static_cast<std::size_t>(k)] == ModeRole{side, pol}) return k;
    throw Error(ErrorCode::LabelingMismatch, "labeling is not a bijection onto side × polarisation");
  }

  void validate() const {
    for (Side s : {Side::A, Side::B})
      for (Polarisation p : {Polarisation::V, Polarisation::H}) (void)mode(s, p);
  }

  /// Ψ± = (a↕b↔ ± a↔b↕)/√2 and Φ± = (a↕b↕ ± a↔b↔)/√2 as polynomials in the output variables.
  BargmannPolynomial polynomial() const {
    validate();
    const int av = mode(Side::A, Polarisation::V);
    const int ah = mode(Side::A, Polarisation::H);
    const int bv = mode(Side::B, Polarisation::V);
    const int bh = mode(Side::B, Polarisation::H);
    const double h = 1.0 / std::sqrt(2.0);
    switch (state) {
      case BellState::PsiMinus: return BargmannPolynomial::pair(4, av, bh, h) + BargmannPolynomial::pair(4, ah, bv, -h);
      case BellState::PsiPlus: return BargmannPolynomial::pair(4, av, bh, h) + BargmannPolynomial::pair(4, ah, bv, h);
      case BellState::PhiMinus: return BargmannPolynomial::pair(4, av, bv, h) + BargmannPolynomial::pair(4, ah, bh, -h);
      case BellState::PhiPlus: return BargmannPolynomial::pair(4, av, bv, h) + BargmannPolynomial::pair(4, ah, bh, h);
    }
    return BargmannPolynomial(4);
  }

  std::vector<Side> partition() const {
    std::vector<Side> sides;
    for (const ModeRole& r : labeling) sides.push_back(r.side);
    return sides;
  }
};

struct EntanglementReport {
  double bell_fidelity = 0.0;
  /// Fidelity within the one-photon-per-side sector only.
  double sector_fidelity = 0.0;
  double vacuum_weight = 0.0;
  double entropy_bits = 0.0;
  /// 1 − bell_fidelity
  double pollution = 1.0;

  bool near_maximal(const Config& cfg = default_config()) const { return bell_fidelity >= 1.0 - cfg.pollution_epsilon; }
};

struct FidelityOptions {
  /// Per-side photon cap for the Schmidt decomposition; 0 picks one from the tail bound.
  int cutoff = 0;
  bool with_entropy = true;
};

namespace detail {

inline double entropy_from_singular_values(const RealVector& s) {
  const double total = s.squaredNorm();
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double p = s(k) * s(k) / total;
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

/// Fock amplitude matrix over (A-side tuple, B-side tuple) pairs, each side capped
/// at `per_side` photons, read off a series truncated at 2·per_side.
inline ComplexMatrix schmidt_matrix(const TruncatedSeries& series, const std::vector<Side>& partition, int per_side) {
  std::vector<int> a_modes;
  std::vector<int> b_modes;
  for (std::size_t k = 0; k < partition.size(); ++k) (partition[k] == Side::A ? a_modes : b_modes).push_back(static_cast<int>(k));
  const TupleIndex ia(static_cast<int>(a_modes.size()), per_side);
  const TupleIndex ib(static_cast<int>(b_modes.size()), per_side);
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(ia.size()), static_cast<Eigen::Index>(ib.size()));
  Monomial full(partition.size(), 0);
  ia.for_each([&](const Monomial& ta, std::size_t ra) {
    for (std::size_t k = 0; k < a_modes.size(); ++k) full[static_cast<std::size_t>(a_modes[k])] = ta[k];
    ib.for_each([&](const Monomial& tb, std::size_t rb) {
      for (std::size_t k = 0; k < b_modes.size(); ++k) full[static_cast<std::size_t>(b_modes[k])] = tb[k];
      if (total_degree(full) > series.max_degree()) return;
      m(static_cast<Eigen::Index>(ra), static_cast<Eigen::Index>(rb)) =
          series.coefficient(full) * std::sqrt(multi_factorial(full));
    });
  });
  return m;
}

inline void check_partition(const std::vector<Side>& partition, int n_modes) {
  if (static_cast<int>(partition.size()) != n_modes) {
    throw Error(ErrorCode::LabelingMismatch, "partition must assign a side to every mode");
  }
}

}  // namespace detail

/// Entropy (bits) of side A for a normalized polynomial state.
inline double vn_entropy(const BargmannPolynomial& state, const std::vector<Side>& partition,
                         const Config& cfg = default_config()) {
  detail::check_partition(partition, state.n_modes());
  const double norm = state.fock_norm_squared();
  if (std::abs(norm - 1.0) > cfg.normalization_tol) {
    throw Error(ErrorCode::NotNormalized, "state norm² is " + std::to_string(norm) + ", expected 1");
  }
  const int degree = std::max(state.max_degree(), 0);
  TruncatedSeries series(state.n_modes(), degree);
  for (const auto& [m, c] : state.terms()) series.coeffs()[series.rank(m)] = c;
  const ComplexMatrix m = detail::schmidt_matrix(series, partition, degree);
  return detail::entropy_from_singular_values(Eigen::JacobiSVD<ComplexMatrix>(m).singularValues());
}

/// Schmidt entropy of the full conditional state (prefactor × residual exponential),
/// from an expansion exact within the per-side box of `per_side` photons.
inline double schmidt_entropy(const ConditionalState& c, const std::vector<Side>& partition, int per_side) {
  detail::check_partition(partition, c.n_outputs());
  const TruncatedSeries series = conditional_series(c, 2 * per_side);
  const ComplexMatrix m = detail::schmidt_matrix(series, partition, per_side);
  return detail::entropy_from_singular_values(Eigen::BDCSVD<ComplexMatrix>(m).singularValues());
}

/// Smallest per-side cap whose discarded weight is below 1e-14 of the state, at least the prefactor degree.
inline int auto_entropy_cutoff(const ConditionalState& c, double norm_sq) {
  const int degree = std::max(c.poly.max_degree(), 0);
  for (int per_side = std::max(degree, 2); per_side <= degree + 24; ++per_side) {
    if (truncation_tail_bound(c, per_side) <= 1e-14 * norm_sq) return per_side;
  }
  return degree + 24;
}

/// Fidelity of c against an arbitrary normalized two-photon polynomial over the same outputs.
inline EntanglementReport fidelity_report(const ConditionalState& c, const BargmannPolynomial& target,
                                          const std::vector<Side>& partition, const FidelityOptions& opts = {},
                                          const Config& cfg = default_config()) {
  const int n_out = c.n_outputs();
  if (n_out != target.n_modes()) {
    throw Error(ErrorCode::LabelingMismatch, "conditional state has " + std::to_string(n_out) +
                                                 " output modes, target expects " + std::to_string(target.n_modes()));
  }
  detail::check_partition(partition, n_out);
  if (opts.cutoff != 0 && opts.cutoff < std::max(c.poly.max_degree(), 2)) {
    throw Error(ErrorCode::CutoffTooSmall, "cutoff " + std::to_string(opts.cutoff) +
                                               " is below the conditional degree or the two-photon sector");
  }
  (void)cfg;
  EntanglementReport r;
  const double norm_sq = conditional_norm_squared(c);
  if (!(norm_sq > 0.0)) {
    r.pollution = 1.0;
    return r;
  }
  // Coefficients through degree 2 of poly · exp(residual).
  const TruncatedSeries low = conditional_series(c, 2);
  Complex overlap = 0.0;
  for (const auto& [m, t] : target.terms()) overlap += std::conj(t) * low.coefficient(m) * multi_factorial(m);
  double sector = 0.0;
  Monomial m(static_cast<std::size_t>(n_out), 0);
  for (int a = 0; a < n_out; ++a) {
    for (int b = 0; b < n_out; ++b) {
      if (partition[static_cast<std::size_t>(a)] != Side::A || partition[static_cast<std::size_t>(b)] != Side::B) continue;
      ++m[static_cast<std::size_t>(a)];
      ++m[static_cast<std::size_t>(b)];
      sector += std::norm(low.coefficient(m));
      --m[static_cast<std::size_t>(a)];
      --m[static_cast<std::size_t>(b)];
    }
  }
  const double ov = std::norm(overlap) / target.fock_norm_squared();
  r.bell_fidelity = std::clamp(ov / norm_sq, 0.0, 1.0);
  r.sector_fidelity = sector > 0.0 ? std::clamp(ov / sector, 0.0, 1.0) : 0.0;
  r.vacuum_weight = std::norm(low.coefficient(Monomial(static_cast<std::size_t>(n_out), 0))) / norm_sq;
  r.pollution = 1.0 - r.bell_fidelity;
  if (opts.with_entropy) {
    const int per_side = opts.cutoff != 0 ? opts.cutoff : auto_entropy_cutoff(c, norm_sq);
    r.entropy_bits = schmidt_entropy(c, partition, per_side);
  }
  return r;
}

/// Bell fidelity, sector fidelity, vacuum weight and entropy of c against the target.
inline EntanglementReport bell_fidelity(const ConditionalState& c, const BellTarget& target,
                                        const FidelityOptions& opts = {}, const Config& cfg = default_config()) {
  target.validate();
  if (c.n_outputs() != 4) {
    throw Error(ErrorCode::LabelingMismatch,
                "Bell targets need 4 output modes, conditional state has " + std::to_string(c.n_outputs()));
  }
  return fidelity_report(c, target.polynomial(), target.partition(), opts, cfg);
}

/// Conditional state for a bare polynomial prefactor (no residual exponential).
inline ConditionalState polynomial_state(const BargmannPolynomial& p) {
  ConditionalState c;
  c.poly = p;
  c.residual_B = ComplexMatrix::Zero(p.n_modes(), p.n_modes());
  c.residual_linear = ComplexVector::Zero(p.n_modes());
  for (int k = 0; k < p.n_modes(); ++k) c.pattern.outputs.push_back(k);
  return c;
}

/// Applies a passive transformation a†_j → Σ_k W_kj a†_k to the output modes.
inline ConditionalState transform_outputs(const ConditionalState& c, const ComplexMatrix& w) {
  ConditionalState out = c;
  out.poly = c.poly.substitute(w);
  out.residual_B = w * c.residual_B * w.transpose();
  if (c.residual_linear.size() > 0) out.residual_linear = w * c.residual_linear;
  out.matching_terms.clear();
  out.linear_forms.resize(0, 0);
  return out;
}

/// Polarisation rotation by `angle` on one side followed by a phase `phase` on its ↔ mode,
/// as a 4×4 passive matrix in the target's labeling.
inline ComplexMatrix local_polarisation_rotation(const BellTarget& target, Side side, double angle, double phase) {
  const int v = target.mode(side, Polarisation::V);
  const int h = target.mode(side, Polarisation::H);
  ComplexMatrix w = ComplexMatrix::Identity(4, 4);
  const Complex e = std::polar(1.0, phase);
  // columns: image of a†_v and a†_h
  w(v, v) = std::cos(angle);
  w(h, v) = e * std::sin(angle);
  w(v, h) = -std::sin(angle);
  w(h, h) = e * std::cos(angle);
  return w;
}

}  // namespace bellforge
