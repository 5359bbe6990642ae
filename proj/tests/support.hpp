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
#include <random>
#include <vector>

#include "bellforge/bargmann.hpp"
#include "bellforge/circuit.hpp"
#include "bellforge/fock.hpp"
#include "bellforge/linalg.hpp"

namespace bellforge::testing {

inline ComplexMatrix random_complex(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * Complex(g(rng), g(rng));
  return m;
}

inline ComplexMatrix random_symmetric(std::mt19937_64& rng, int n, double scale = 1.0) {
  const ComplexMatrix a = random_complex(rng, n, n, scale);
  return 0.5 * (a + a.transpose());
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, int n) {
  const ComplexMatrix a = random_complex(rng, n, n);
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

/// Normalizable Gaussian B with largest Takagi value of 2B equal to `xi`.
inline ComplexMatrix random_b(std::mt19937_64& rng, int n, double xi) {
  const ComplexMatrix s = random_symmetric(rng, n);
  const double top = Eigen::JacobiSVD<ComplexMatrix>(2.0 * s).singularValues()(0);
  return s * (xi / top);
}

/// Random circuit of `depth` elements on n modes, squeezing magnitudes ≤ max_r.
inline CircuitSpec random_circuit(std::mt19937_64& rng, int n, int depth, double max_r) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<int> mode(0, n - 1);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> squeeze(0.05, max_r);
  CircuitSpec spec;
  spec.n_modes = n;
  auto two_modes = [&] {
    const int i = mode(rng);
    int j = mode(rng);
    while (j == i) j = mode(rng);
    return std::pair{i, j};
  };
  for (int k = 0; k < depth; ++k) {
    switch (kind(rng)) {
      case 0: {
        const auto [i, j] = two_modes();
        spec.elements.push_back(Element::beam_splitter(i, j, angle(rng), angle(rng)));
        break;
      }
      case 1: spec.elements.push_back(Element::phase_shifter(mode(rng), angle(rng))); break;
      case 2: spec.elements.push_back(Element::single_mode_squeezer(mode(rng), squeeze(rng), angle(rng))); break;
      default: {
        const auto [i, j] = two_modes();
        spec.elements.push_back(Element::two_mode_squeezer(i, j, squeeze(rng), angle(rng)));
        break;
      }
    }
  }
  return spec;
}

/// Largest |Bargmann − oracle| over the conditional output amplitudes with total ≤ cutoff − M.
/// The oracle's global phase is removed through its vacuum amplitude.
inline double oracle_difference(const CircuitSpec& spec, const DetectionPattern& pattern, int cutoff) {
  const GaussianBargmann g = simulate(spec);
  const FockTensor t = evolve_truncated(spec, cutoff);
  const FockTensor p = project(t, pattern);
  const Complex vac = t.amplitudes[0];
  const Complex phase = std::abs(vac) > 0 ? vac / std::abs(vac) : Complex(1.0);
  const ConditionalState c = postselect(g, pattern);
  const TruncatedSeries s = conditional_series(c, p.cutoff);
  double diff = 0.0;
  TupleIndex(p.n_modes, p.cutoff).for_each([&](const Monomial& m, std::size_t k) {
    diff = std::max(diff, std::abs(s.fock_amplitude(s.rank(m)) / g.norm - std::conj(phase) * p.amplitudes[k]));
  });
  return diff;
}

}  // namespace bellforge::testing
