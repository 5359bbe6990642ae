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
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "bellforge/bargmann.hpp"
#include "bellforge/circuit.hpp"
#include "bellforge/config.hpp"
#include "bellforge/entanglement.hpp"
#include "bellforge/error.hpp"

namespace bellforge {

/// α₀α₁ − α₂α₃ = Σ_ij α_i E_ij α_j with E symmetric: E₀₁ = E₁₀ = ½, E₂₃ = E₃₂ = −½.
/// det E = 1/16, rank 4, every singular value ½.
inline ComplexMatrix e_matrix() {
  ComplexMatrix e = ComplexMatrix::Zero(4, 4);
  e(0, 1) = e(1, 0) = 0.5;
  e(2, 3) = e(3, 2) = -0.5;
  return e;
}

/// Symmetric coefficient matrix of a target's quadratic polynomial (unnormalized Σ α_i Q_ij α_j form).
inline ComplexMatrix quadratic_coefficients(const BargmannPolynomial& p) {
  const int n = p.n_modes();
  ComplexMatrix q = ComplexMatrix::Zero(n, n);
  for (const auto& [m, c] : p.terms()) {
    if (total_degree(m) != 2) continue;
    std::array<int, 2> idx{};
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < m[static_cast<std::size_t>(i)]; ++r) idx[static_cast<std::size_t>(k++)] = i;
    if (idx[0] == idx[1]) {
      q(idx[0], idx[0]) += c;
    } else {
      q(idx[0], idx[1]) += 0.5 * c;
      q(idx[1], idx[0]) += 0.5 * c;
    }
  }
  return q;
}

/// Squared overlap between the normalized states αᵀQα and αᵀEα. For symmetric
/// matrices this is the squared cosine of the Frobenius angle between them.
inline double quadratic_form_fidelity(const ComplexMatrix& q, const ComplexMatrix& e = e_matrix()) {
  const double nq = q.squaredNorm();
  const double ne = e.squaredNorm();
  if (nq == 0.0 || ne == 0.0) return 0.0;
  const Complex inner = (e.adjoint() * q).trace();
  return std::norm(inner) / (nq * ne);
}

/// Largest fidelity with Ψ⁻ of any two-photon state whose symmetric coefficient
/// matrix has rank ≤ 2. E has four equal singular values, so the best rank-2
/// approximation keeps half of ‖E‖_F²; the brute-force oracle in the test suite
/// re-derives this value.
inline constexpr double kRank2FidelityBound = 0.5;

inline double rank2_fidelity_bound() { return kRank2FidelityBound; }

struct QuadraticForm {
  /// M̃_ij = (B_{i s1} B_{j s2} + B_{j s1} B_{i s2}) / 2 over the output modes.
  ComplexMatrix m_tilde;
  /// 2 B_{s1 s2}, the constant term of the conditional prefactor.
  Complex vacuum_term;
};

inline void require_two_detections(const GaussianBargmann& state, const DetectionPattern& pattern) {
  pattern.validate(static_cast<int>(state.n_modes()));
  if (pattern.detected.size() != 2) {
    throw Error(ErrorCode::WrongDetectionCount,
                "two-photon certificate needs exactly 2 detected modes, got " + std::to_string(pattern.detected.size()));
  }
  if (pattern.outputs.size() != 4) {
    throw Error(ErrorCode::LabelingMismatch,
                "two-photon certificate needs 4 output modes, got " + std::to_string(pattern.outputs.size()));
  }
}

/// The conditional prefactor is vacuum_term + 4 αᵀM̃α.
inline QuadraticForm extract_quadratic_form(const GaussianBargmann& state, const DetectionPattern& pattern) {
  require_two_detections(state, pattern);
  const int s1 = pattern.detected[0];
  const int s2 = pattern.detected[1];
  ComplexVector u(4);
  ComplexVector v(4);
  for (int i = 0; i < 4; ++i) {
    u(i) = state.B(pattern.outputs[static_cast<std::size_t>(i)], s1);
    v(i) = state.B(pattern.outputs[static_cast<std::size_t>(i)], s2);
  }
  QuadraticForm q;
  q.m_tilde = 0.5 * (u * v.transpose() + v * u.transpose());
  q.vacuum_term = 2.0 * state.B(s1, s2);
  return q;
}

enum class Verdict { TwoPhotonNoGo, Inconclusive };

inline std::string_view to_string(Verdict v) {
  return v == Verdict::TwoPhotonNoGo ? "TwoPhotonNoGo" : "Inconclusive";
}

struct NoGoCertificate {
  ComplexMatrix m_tilde;
  Complex det_m;
  int rank_m = 0;
  std::array<double, 4> singular_values{};
  Complex vacuum_term;
  Verdict verdict = Verdict::Inconclusive;
  double max_fidelity_bound = kRank2FidelityBound;
  /// Fidelity of the bilinear part αᵀM̃α alone with Ψ⁻; never above max_fidelity_bound.
  double quadratic_fidelity = 0.0;
  /// M̃ = 0: no bilinear term at all.
  bool degenerate = false;
};

inline NoGoCertificate certify_two_photon_nogo(const GaussianBargmann& state, const DetectionPattern& pattern,
                                               const Config& cfg = default_config()) {
  const QuadraticForm q = extract_quadratic_form(state, pattern);
  NoGoCertificate c;
  c.m_tilde = q.m_tilde;
  c.vacuum_term = q.vacuum_term;
  c.det_m = q.m_tilde.determinant();
  const RealVector sv = Eigen::JacobiSVD<ComplexMatrix>(q.m_tilde).singularValues();
  for (int k = 0; k < 4; ++k) c.singular_values[static_cast<std::size_t>(k)] = sv(k);
  for (int k = 0; k < 4; ++k)
    if (sv(k) > cfg.rank_relative * sv(0)) ++c.rank_m;
  const double scale = q.m_tilde.norm();
  c.degenerate = scale == 0.0;
  if (c.degenerate) c.rank_m = 0;
  c.verdict = std::abs(c.det_m) <= cfg.det_zero_relative * std::pow(scale, 4) ? Verdict::TwoPhotonNoGo
                                                                                 : Verdict::Inconclusive;
  c.quadratic_fidelity = quadratic_form_fidelity(q.m_tilde);
  return c;
}

/// ψ = exp(dᵀα) conditioned on the pattern: every derivative only pulls down a
/// constant, so the result is a product state and its entropy vanishes.
inline EntanglementReport coherent_only_negative(const ComplexVector& d, const DetectionPattern& pattern,
                                                 const Config& cfg = default_config()) {
  require_finite(d, "displacement");
  const int n = static_cast<int>(d.size());
  const ConditionalState c =
      postselect_exponential(ComplexMatrix::Zero(n, n), d, 1.0, pattern, cfg);
  if (c.n_outputs() == 4) return bell_fidelity(c, BellTarget{}, {}, cfg);
  std::vector<Side> partition;
  for (int k = 0; k < c.n_outputs(); ++k) partition.push_back(k % 2 == 0 ? Side::A : Side::B);
  EntanglementReport r;
  const double norm_sq = conditional_norm_squared(c);
  if (norm_sq > 0.0) r.entropy_bits = schmidt_entropy(c, partition, auto_entropy_cutoff(c, norm_sq));
  return r;
}

}  // namespace bellforge
