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
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "bellforge/config.hpp"
#include "bellforge/error.hpp"

namespace bellforge {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

inline void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) {
    throw Error(ErrorCode::NonFiniteEntry, std::string(what) + " has a NaN or Inf entry");
  }
}

/// Frobenius-norm asymmetry ‖S − Sᵀ‖ relative to max(1, ‖S‖).
inline double asymmetry(const ComplexMatrix& s) {
  const double scale = std::max(1.0, s.norm());
  return (s - s.transpose()).norm() / scale;
}

inline double unitarity_residual(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).norm();
}

/// S = W diag(d) Wᵀ with W unitary and d sorted descending.
struct TakagiFactorization {
  ComplexMatrix W;
  RealVector d;

  ComplexMatrix reconstruct() const { return W * d.cast<Complex>().asDiagonal() * W.transpose(); }
};

namespace detail {

inline bool is_diagonal(const ComplexMatrix& s) {
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index j = 0; j < s.cols(); ++j)
      if (i != j && s(i, j) != Complex{0.0, 0.0}) return false;
  return true;
}

inline TakagiFactorization takagi_diagonal(const ComplexMatrix& s) {
  const Eigen::Index n = s.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(s(a, a)) > std::abs(s(b, b));
  });
  TakagiFactorization out{ComplexMatrix::Zero(n, n), RealVector::Zero(n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index i = order[static_cast<std::size_t>(k)];
    const Complex z = s(i, i);
    out.d(k) = std::abs(z);
    out.W(i, k) = z == Complex{0.0, 0.0} ? Complex{1.0, 0.0} : std::polar(1.0, std::arg(z) / 2.0);
  }
  return out;
}

}  // namespace detail

/// Takagi factorization of a complex symmetric matrix.
///
/// Computed from an SVD S = U Σ Vᴴ followed by a phase correction: for symmetric
/// S the matrix Z = Uᴴ conj(V) is unitary, symmetric and commutes with Σ, so
/// W = U Z^{1/2} satisfies S = W Σ Wᵀ. Columns belonging to (numerically) zero
/// singular values are left as returned by the SVD.
inline TakagiFactorization takagi_decompose(const ComplexMatrix& s,
                                            const Config& cfg = default_config()) {
  if (s.rows() != s.cols()) {
    throw Error(ErrorCode::NonSymmetricInput, "Takagi input must be square");
  }
  require_finite(s, "Takagi input");
  if (asymmetry(s) > cfg.symmetry_tol) {
    throw Error(ErrorCode::NonSymmetricInput, "Takagi input is not symmetric");
  }
  const Eigen::Index n = s.rows();
  if (n == 0) return {ComplexMatrix(0, 0), RealVector(0)};
  if (detail::is_diagonal(s)) return detail::takagi_diagonal(s);

  const ComplexMatrix sym = 0.5 * (s + s.transpose());
  Eigen::JacobiSVD<ComplexMatrix> svd(sym, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector sigma = svd.singularValues();
  const ComplexMatrix& u = svd.matrixU();
  ComplexMatrix z = u.adjoint() * svd.matrixV().conjugate();

  const double cut = 1e-13 * sigma(0);
  Eigen::Index rank = 0;
  while (rank < n && sigma(rank) > cut) ++rank;
  for (Eigen::Index i = rank; i < n; ++i) {
    z.row(i).setZero();
    z.col(i).setZero();
    z(i, i) = 1.0;
  }
  for (Eigen::Index i = 0; i < rank; ++i)
    for (Eigen::Index j = rank; j < n; ++j) z(i, j) = z(j, i) = 0.0;
  const ComplexMatrix zs = 0.5 * (z + z.transpose());
  const ComplexMatrix root = zs.sqrt();

  return {u * root, sigma};
}

/// Mode transformation (E', F') of a quadratic (Gaussian) unitary U:
/// U a U† = E' a + F' a†, i.e. the annihilators of U|ψ⟩ in terms of those of |ψ⟩.
struct BogoliubovTransform {
  ComplexMatrix E;
  ComplexMatrix F;

  static BogoliubovTransform identity(Eigen::Index n) {
    return {ComplexMatrix::Identity(n, n), ComplexMatrix::Zero(n, n)};
  }

  static BogoliubovTransform passive(const ComplexMatrix& u) {
    return {u, ComplexMatrix::Zero(u.rows(), u.cols())};
  }

  /// Single-mode squeezers exp(½(r a†² − r a²)) with real r on every mode.
  static BogoliubovTransform squeezers(const RealVector& r) {
    const Eigen::Index n = r.size();
    BogoliubovTransform t = identity(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      t.E(k, k) = std::cosh(r(k));
      t.F(k, k) = -std::sinh(r(k));
    }
    return t;
  }

  Eigen::Index n_modes() const { return E.rows(); }

  /// The transform of "this, then next".
  BogoliubovTransform then(const BogoliubovTransform& next) const {
    return {E * next.E + F * next.F.conjugate(), E * next.F + F * next.E.conjugate()};
  }

  /// max of ‖E'E'† − F'F'† − I‖_F and ‖E'F'ᵀ − (E'F'ᵀ)ᵀ‖_F.
  double symplectic_residual() const {
    const Eigen::Index n = n_modes();
    const double r1 = (E * E.adjoint() - F * F.adjoint() - ComplexMatrix::Identity(n, n)).norm();
    const ComplexMatrix ef = E * F.transpose();
    const double r2 = (ef - ef.transpose()).norm();
    return std::max(r1, r2);
  }
};

/// Passive interferometer, single-mode squeezers, passive interferometer.
struct BlochMessiahDecomposition {
  ComplexMatrix first_passive;  // V
  RealVector squeezing;         // r ≥ 0
  ComplexMatrix last_passive;   // U'

  BogoliubovTransform recompose() const {
    return BogoliubovTransform::passive(first_passive)
        .then(BogoliubovTransform::squeezers(squeezing))
        .then(BogoliubovTransform::passive(last_passive));
  }
};

/// With the composition rule above, E' = V cosh(r) U' and F' = −V sinh(r) conj(U'),
/// so −E'F'ᵀ = V (sinh 2r / 2) Vᵀ is a Takagi problem for V and r.
inline BlochMessiahDecomposition bloch_messiah(const BogoliubovTransform& t,
                                               const Config& cfg = default_config()) {
  require_finite(t.E, "Bogoliubov E'");
  require_finite(t.F, "Bogoliubov F'");
  if (t.E.rows() != t.E.cols() || t.F.rows() != t.E.rows() || t.F.cols() != t.E.cols()) {
    throw Error(ErrorCode::NotSymplectic, "E' and F' must be square and of equal size");
  }
  if (t.symplectic_residual() > cfg.not_symplectic_tol) {
    throw Error(ErrorCode::NotSymplectic, "transform violates the symplectic constraints");
  }
  const Eigen::Index n = t.n_modes();
  ComplexMatrix g = -t.E * t.F.transpose();
  g = 0.5 * (g + g.transpose());
  const TakagiFactorization tk = takagi_decompose(g, cfg);

  BlochMessiahDecomposition out;
  out.first_passive = tk.W;
  out.squeezing = RealVector(n);
  RealVector inv_cosh(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double r = 0.5 * std::asinh(2.0 * tk.d(k));
    out.squeezing(k) = r;
    inv_cosh(k) = 1.0 / std::cosh(r);
  }
  out.last_passive = inv_cosh.cast<Complex>().asDiagonal() * (tk.W.adjoint() * t.E);
  return out;
}

}  // namespace bellforge
