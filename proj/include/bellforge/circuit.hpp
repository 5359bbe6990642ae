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
#include <numbers>
#include <string>
#include <vector>

#include "bellforge/config.hpp"
#include "bellforge/error.hpp"
#include "bellforge/linalg.hpp"

namespace bellforge {

enum class ElementKind { BeamSplitter, PhaseShifter, SingleModeSqueezer, TwoModeSqueezer };

inline std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::BeamSplitter: return "beam_splitter";
    case ElementKind::PhaseShifter: return "phase_shifter";
    case ElementKind::SingleModeSqueezer: return "single_mode_squeezer";
    case ElementKind::TwoModeSqueezer: return "two_mode_squeezer";
  }
  return "unknown";
}

/// One optical element. Conventions, written as the mode map U a U† = E'a + F'a†:
///
///   beam_splitter(θ, φ; i, j)         E' block [[cos θ, −e^{iφ} sin θ], [e^{−iφ} sin θ, cos θ]]
///   phase_shifter(φ; i)               U = exp(iφ n_i), E'_ii = e^{−iφ}
///   single_mode_squeezer(r, φ; i)     U = exp(½(ζ a†² − ζ* a²)), ζ = r e^{iφ}
///   two_mode_squeezer(r, φ; i, j)     U = exp(ζ a_i† a_j† − ζ* a_i a_j)
///
/// From vacuum the squeezers give B_ii = e^{iφ} tanh(r)/2 and B_ij = e^{iφ} tanh(r)/2.
struct Element {
  ElementKind kind = ElementKind::PhaseShifter;
  int mode_a = 0;
  int mode_b = -1;
  /// θ for beam splitters, r for squeezers; unused by phase shifters.
  double amount = 0.0;
  double phase = 0.0;

  static Element beam_splitter(int i, int j, double theta, double phi = 0.0) {
    return {ElementKind::BeamSplitter, i, j, theta, phi};
  }
  static Element phase_shifter(int i, double phi) { return {ElementKind::PhaseShifter, i, -1, 0.0, phi}; }
  static Element single_mode_squeezer(int i, double r, double phi = 0.0) {
    return {ElementKind::SingleModeSqueezer, i, -1, r, phi};
  }
  static Element two_mode_squeezer(int i, int j, double r, double phi = 0.0) {
    return {ElementKind::TwoModeSqueezer, i, j, r, phi};
  }

  bool is_two_mode() const {
    return kind == ElementKind::BeamSplitter || kind == ElementKind::TwoModeSqueezer;
  }
  bool is_squeezer() const {
    return kind == ElementKind::SingleModeSqueezer || kind == ElementKind::TwoModeSqueezer;
  }

  friend bool operator==(const Element&, const Element&) = default;
};

/// Fixed optical circuit acting on vacuum, detection taking place only at the end.
struct CircuitSpec {
  int n_modes = 0;
  std::vector<Element> elements;
  std::vector<std::string> mode_labels;

  void validate(const Config& cfg = default_config()) const {
    if (n_modes <= 0) throw Error(ErrorCode::ParameterOutOfRange, "n_modes must be positive");
    if (!mode_labels.empty() && static_cast<int>(mode_labels.size()) != n_modes) {
      throw Error(ErrorCode::ParameterOutOfRange, "mode_labels must have one entry per mode");
    }
    for (std::size_t k = 0; k < elements.size(); ++k) {
      const Element& e = elements[k];
      const std::string where = "element " + std::to_string(k) + " (" + std::string(to_string(e.kind)) + ")";
      auto check_mode = [&](int m) {
        if (m < 0 || m >= n_modes) {
          throw Error(ErrorCode::InvalidModeIndex, where + ": mode " + std::to_string(m) + " out of range");
        }
      };
      check_mode(e.mode_a);
      if (e.is_two_mode()) {
        check_mode(e.mode_b);
        if (e.mode_a == e.mode_b) throw Error(ErrorCode::InvalidModeIndex, where + ": modes must differ");
      }
      if (!std::isfinite(e.amount) || !std::isfinite(e.phase)) {
        throw Error(ErrorCode::ParameterOutOfRange, where + ": non-finite parameter");
      }
      if (e.is_squeezer() && std::abs(e.amount) > cfg.max_squeeze) {
        throw Error(ErrorCode::ParameterOutOfRange, where + ": |r| exceeds the configured maximum");
      }
    }
  }

  friend bool operator==(const CircuitSpec&, const CircuitSpec&) = default;
};

inline BogoliubovTransform element_transform(const Element& e, int n_modes) {
  BogoliubovTransform t = BogoliubovTransform::identity(n_modes);
  const int i = e.mode_a;
  const int j = e.mode_b;
  switch (e.kind) {
    case ElementKind::BeamSplitter: {
      const double c = std::cos(e.amount);
      const double s = std::sin(e.amount);
      t.E(i, i) = c;
      t.E(i, j) = -std::polar(s, e.phase);
      t.E(j, i) = std::polar(s, -e.phase);
      t.E(j, j) = c;
      break;
    }
    case ElementKind::PhaseShifter:
      t.E(i, i) = std::polar(1.0, -e.phase);
      break;
    case ElementKind::SingleModeSqueezer:
      t.E(i, i) = std::cosh(e.amount);
      t.F(i, i) = -std::polar(std::sinh(e.amount), e.phase);
      break;
    case ElementKind::TwoModeSqueezer:
      t.E(i, i) = std::cosh(e.amount);
      t.E(j, j) = std::cosh(e.amount);
      t.F(i, j) = -std::polar(std::sinh(e.amount), e.phase);
      t.F(j, i) = t.F(i, j);
      break;
  }
  return t;
}

/// Composes the circuit's elements, the first element acting first.
inline BogoliubovTransform compile(const CircuitSpec& spec, const Config& cfg = default_config()) {
  spec.validate(cfg);
  BogoliubovTransform t = BogoliubovTransform::identity(spec.n_modes);
  for (const Element& e : spec.elements) t = t.then(element_transform(e, spec.n_modes));
  return t;
}

/// Pure Gaussian state ψ(α) = exp(Σ_ij α_i B_ij α_j) produced from vacuum.
struct GaussianBargmann {
  ComplexMatrix B;
  /// ⟨ψ|ψ⟩^{1/2}
  double norm = 1.0;
  /// Largest Takagi value of 2B.
  double xi_scale = 0.0;

  Eigen::Index n_modes() const { return B.rows(); }
  double norm_squared() const { return norm * norm; }

  /// Validates B and derives norm and xi_scale.
  static GaussianBargmann from_matrix(const ComplexMatrix& b, const Config& cfg = default_config()) {
    if (b.rows() != b.cols()) throw Error(ErrorCode::NonSymmetricInput, "B must be square");
    require_finite(b, "B");
    if (asymmetry(b) > cfg.symmetry_tol) throw Error(ErrorCode::NonSymmetricInput, "B is not symmetric");
    GaussianBargmann g;
    g.B = 0.5 * (b + b.transpose());
    if (g.B.size() == 0) return g;
    const RealVector lambda = Eigen::JacobiSVD<ComplexMatrix>(2.0 * g.B).singularValues();
    g.xi_scale = lambda(0);
    if (g.xi_scale >= 1.0) {
      throw Error(ErrorCode::NotNormalizable,
                  "largest Takagi value of 2B is " + std::to_string(g.xi_scale) + " (must be < 1)");
    }
    // ⟨ψ|ψ⟩ = ∏ (1 − λ_k²)^{-1/2} = det(I − 4B†B)^{-1/2}
    double log_norm = 0.0;
    for (Eigen::Index k = 0; k < lambda.size(); ++k) log_norm += -0.25 * std::log1p(-lambda(k) * lambda(k));
    g.norm = std::exp(log_norm);
    return g;
  }
};

/// B = −½ (E')⁻¹ F' for the state U|0⟩.
inline GaussianBargmann gaussian_state(const BogoliubovTransform& t, const Config& cfg = default_config()) {
  if (t.symplectic_residual() > cfg.not_symplectic_tol) {
    throw Error(ErrorCode::NotSymplectic, "transform violates the symplectic constraints");
  }
  Eigen::PartialPivLU<ComplexMatrix> lu(t.E);
  const RealVector sv = Eigen::JacobiSVD<ComplexMatrix>(t.E).singularValues();
  if (sv.size() > 0 && sv(sv.size() - 1) <= 1e-12 * sv(0)) {
    throw Error(ErrorCode::SingularPassivePart, "E' is singular");
  }
  const ComplexMatrix b = -0.5 * lu.solve(t.F);
  return GaussianBargmann::from_matrix(0.5 * (b + b.transpose()), cfg);
}

inline GaussianBargmann simulate(const CircuitSpec& spec, const Config& cfg = default_config()) {
  return gaussian_state(compile(spec, cfg), cfg);
}

/// Down-conversion source on modes (A↕, B↔, A↔, B↕): ψ = |0⟩ + ξ|Ψ⁻⟩ + O(ξ²).
///
/// Two two-mode squeezers with tanh r = ξ/√2 and opposite phases give
/// exp(tanh r (α₁α₂ − α₃α₄)).
inline CircuitSpec pdc_example(double xi) {
  if (!(xi >= 0.0 && xi < 1.0)) throw Error(ErrorCode::ParameterOutOfRange, "pdc_example needs 0 <= xi < 1");
  const double r = std::atanh(xi / std::numbers::sqrt2);
  CircuitSpec spec;
  spec.n_modes = 4;
  spec.mode_labels = {"A_V", "B_H", "A_H", "B_V"};
  spec.elements = {Element::two_mode_squeezer(0, 1, r, 0.0),
                   Element::two_mode_squeezer(2, 3, r, std::numbers::pi)};
  return spec;
}

/// Modes carrying the cascade outputs of cascade_expand(spec, mode, depth), in tree order.
inline std::vector<int> cascade_outputs(int original_modes, int mode, int depth) {
  std::vector<int> out{mode};
  for (int k = 0; k < (1 << depth) - 1; ++k) out.push_back(original_modes + k);
  return out;
}

/// Splits `mode` over 2^depth detectors with a balanced tree of 50:50 beam splitters
/// appended after the existing elements; the new modes enter in vacuum.
inline CircuitSpec cascade_expand(const CircuitSpec& spec, int mode, int depth) {
  if (mode < 0 || mode >= spec.n_modes) {
    throw Error(ErrorCode::InvalidModeIndex, "cascade mode " + std::to_string(mode) + " out of range");
  }
  if (depth < 1 || depth > 10) throw Error(ErrorCode::ParameterOutOfRange, "cascade depth must be in [1, 10]");
  CircuitSpec out = spec;
  std::vector<int> branches{mode};
  int next = spec.n_modes;
  for (int level = 0; level < depth; ++level) {
    std::vector<int> grown;
    for (int b : branches) {
      out.elements.push_back(Element::beam_splitter(b, next, std::numbers::pi / 4.0, 0.0));
      grown.push_back(b);
      grown.push_back(next);
      ++next;
    }
    branches = std::move(grown);
  }
  out.n_modes = next;
  if (!out.mode_labels.empty()) {
    const std::string base = spec.mode_labels[static_cast<std::size_t>(mode)];
    for (int k = spec.n_modes; k < next; ++k) out.mode_labels.push_back(base + "_cascade" + std::to_string(k - spec.n_modes + 1));
  }
  return out;
}

}  // namespace bellforge
