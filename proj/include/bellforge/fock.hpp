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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "bellforge/bargmann.hpp"
#include "bellforge/circuit.hpp"
#include "bellforge/config.hpp"
#include "bellforge/error.hpp"
#include "bellforge/multi_index.hpp"

// Brute-force truncated Fock-space simulation. Deliberately shares nothing with the
// Bogoliubov/Bargmann route beyond the element conventions documented in circuit.hpp.

namespace bellforge {

/// Amplitudes on all photon-number tuples with total ≤ cutoff.
struct FockTensor {
  int n_modes = 0;
  int cutoff = 0;
  std::vector<Complex> amplitudes;

  /// Weight that the evolution carried above `cutoff` (inside the working space).
  double discarded_weight = 0.0;
  /// Norm in the two highest sectors of the working space; bounds the truncation error.
  double boundary_norm = 0.0;
  /// Largest ‖P†P − I‖_F over the element propagators that were applied.
  double unitarity_deficit = 0.0;
  int working_cutoff = 0;

  TupleIndex index() const { return TupleIndex(n_modes, cutoff); }

  Complex at(const Monomial& t) const {
    if (total_degree(t) > cutoff) return 0.0;
    return amplitudes[index().rank(t)];
  }

  double norm_squared() const {
    double s = 0.0;
    for (const Complex& a : amplitudes) s += std::norm(a);
    return s;
  }

  static FockTensor basis_state(int n_modes, const Monomial& occupation, int cutoff) {
    if (total_degree(occupation) > cutoff) {
      throw Error(ErrorCode::CutoffTooSmall, "basis state exceeds the cutoff");
    }
    FockTensor t;
    t.n_modes = n_modes;
    t.cutoff = cutoff;
    t.working_cutoff = cutoff;
    const TupleIndex idx(n_modes, cutoff);
    t.amplitudes.assign(idx.size(), 0.0);
    t.amplitudes[idx.rank(occupation)] = 1.0;
    return t;
  }

  static FockTensor vacuum(int n_modes, int cutoff) {
    return basis_state(n_modes, Monomial(static_cast<std::size_t>(n_modes), 0), cutoff);
  }
};

namespace detail {

class FockWorkspace {
 public:
  FockWorkspace(int n_modes, int working_cutoff)
      : n_(n_modes), w_(working_cutoff), index_(n_modes, working_cutoff), amps_(index_.size(), 0.0) {}

  const TupleIndex& index() const { return index_; }
  std::vector<Complex>& amps() { return amps_; }
  double unitarity_deficit() const { return deficit_; }

  void apply(const Element& e) {
    switch (e.kind) {
      case ElementKind::PhaseShifter: apply_phase(e); break;
      case ElementKind::BeamSplitter: apply_beam_splitter(e); break;
      case ElementKind::SingleModeSqueezer: apply_single_mode_squeezer(e); break;
      case ElementKind::TwoModeSqueezer: apply_two_mode_squeezer(e); break;
    }
  }

 private:
  // Calls fn(tuple, L) for every tuple with zeros at `fixed` positions, L = W − total.
  template <typename Fn>
  void for_each_rest(const std::vector<int>& fixed, Fn&& fn) const {
    const int k = n_ - static_cast<int>(fixed.size());
    std::vector<int> free_modes;
    for (int p = 0; p < n_; ++p)
      if (std::find(fixed.begin(), fixed.end(), p) == fixed.end()) free_modes.push_back(p);
    Monomial full(static_cast<std::size_t>(n_), 0);
    TupleIndex(k, w_).for_each([&](const Monomial& rest, std::size_t) {
      int used = 0;
      for (int p = 0; p < k; ++p) {
        full[static_cast<std::size_t>(free_modes[static_cast<std::size_t>(p)])] = rest[static_cast<std::size_t>(p)];
        used += rest[static_cast<std::size_t>(p)];
      }
      for (int f : fixed) full[static_cast<std::size_t>(f)] = 0;
      fn(full, w_ - used);
    });
  }

  void track(const ComplexMatrix& p) {
    const double d = (p.adjoint() * p - ComplexMatrix::Identity(p.rows(), p.cols())).norm();
    deficit_ = std::max(deficit_, d);
  }

  void apply_block(const ComplexMatrix& p, const std::vector<std::size_t>& idx) {
    const Eigen::Index len = static_cast<Eigen::Index>(idx.size());
    ComplexVector in(len);
    for (Eigen::Index k = 0; k < len; ++k) in(k) = amps_[idx[static_cast<std::size_t>(k)]];
    const ComplexVector out = p * in;
    for (Eigen::Index k = 0; k < len; ++k) amps_[idx[static_cast<std::size_t>(k)]] = out(k);
  }

  void apply_phase(const Element& e) {
    const int i = e.mode_a;
    for_each_rest({i}, [&](Monomial& t, int room) {
      for (int n = 1; n <= room; ++n) {
        t[static_cast<std::size_t>(i)] = n;
        amps_[index_.rank(t)] *= std::polar(1.0, e.phase * n);
      }
      t[static_cast<std::size_t>(i)] = 0;
    });
  }

  // Creation operators are mapped as a†_i → x a†_i + y a†_j, a†_j → u a†_i + v a†_j.
  static ComplexMatrix beam_splitter_block(int total, Complex x, Complex y, Complex u, Complex v) {
    ComplexMatrix t = ComplexMatrix::Zero(total + 1, total + 1);
    for (int k = 0; k <= total; ++k) {
      const int rest = total - k;
      for (int p = 0; p <= k; ++p) {
        for (int q = 0; q <= rest; ++q) {
          const int l = p + q;
          const double binom = std::tgamma(k + 1.0) / (std::tgamma(p + 1.0) * std::tgamma(k - p + 1.0)) *
                               std::tgamma(rest + 1.0) / (std::tgamma(q + 1.0) * std::tgamma(rest - q + 1.0));
          const double scale = std::sqrt(factorial(l) * factorial(total - l) / (factorial(k) * factorial(rest)));
          t(l, k) += binom * scale * std::pow(x, p) * std::pow(y, k - p) * std::pow(u, q) * std::pow(v, rest - q);
        }
      }
    }
    return t;
  }

  void apply_beam_splitter(const Element& e) {
    const int i = e.mode_a;
    const int j = e.mode_b;
    const double c = std::cos(e.amount);
    const double s = std::sin(e.amount);
    // U a U† block [[c, −e^{iφ}s], [e^{−iφ}s, c]]; U a† U† is its conjugate.
    const Complex x = c;
    const Complex y = std::conj(-std::polar(s, e.phase));
    const Complex u = std::conj(std::polar(s, -e.phase));
    const Complex v = c;
    std::vector<ComplexMatrix> blocks;
    for (int total = 0; total <= w_; ++total) {
      blocks.push_back(beam_splitter_block(total, x, y, u, v));
      track(blocks.back());
    }
    std::vector<std::size_t> idx;
    for_each_rest({i, j}, [&](Monomial& t, int room) {
      for (int total = 0; total <= room; ++total) {
        idx.clear();
        for (int k = 0; k <= total; ++k) {
          t[static_cast<std::size_t>(i)] = k;
          t[static_cast<std::size_t>(j)] = total - k;
          idx.push_back(index_.rank(t));
        }
        apply_block(blocks[static_cast<std::size_t>(total)], idx);
      }
      t[static_cast<std::size_t>(i)] = 0;
      t[static_cast<std::size_t>(j)] = 0;
    });
  }

  // exp of the truncated generator ½(ζ a†² − ζ* a²) on |0⟩..|L⟩ (scaling and squaring).
  ComplexMatrix single_mode_propagator(int room, Complex zeta) {
    ComplexMatrix g = ComplexMatrix::Zero(room + 1, room + 1);
    for (int n = 0; n + 2 <= room; ++n) {
      const double amp = 0.5 * std::sqrt((n + 1.0) * (n + 2.0));
      g(n + 2, n) = zeta * amp;
      g(n, n + 2) = -std::conj(zeta) * amp;
    }
    ComplexMatrix p = g.exp();
    track(p);
    return p;
  }

  void apply_single_mode_squeezer(const Element& e) {
    const int i = e.mode_a;
    const Complex zeta = std::polar(e.amount, e.phase);
    std::map<int, ComplexMatrix> cache;
    std::vector<std::size_t> idx;
    for_each_rest({i}, [&](Monomial& t, int room) {
      auto it = cache.find(room);
      if (it == cache.end()) it = cache.emplace(room, single_mode_propagator(room, zeta)).first;
      idx.clear();
      for (int k = 0; k <= room; ++k) {
        t[static_cast<std::size_t>(i)] = k;
        idx.push_back(index_.rank(t));
      }
      t[static_cast<std::size_t>(i)] = 0;
      apply_block(it->second, idx);
    });
  }

  // Chain (k + δ, k), k = 0..len−1, of the generator ζ a_i†a_j† − ζ* a_i a_j.
  ComplexMatrix two_mode_propagator(int len, int offset, Complex zeta) {
    ComplexMatrix g = ComplexMatrix::Zero(len, len);
    for (int k = 0; k + 1 < len; ++k) {
      const double amp = std::sqrt((k + offset + 1.0) * (k + 1.0));
      g(k + 1, k) = zeta * amp;
      g(k, k + 1) = -std::conj(zeta) * amp;
    }
    ComplexMatrix p = g.exp();
    track(p);
    return p;
  }

  void apply_two_mode_squeezer(const Element& e) {
    const int i = e.mode_a;
    const int j = e.mode_b;
    const Complex zeta = std::polar(e.amount, e.phase);
    std::map<std::pair<int, int>, ComplexMatrix> cache;
    std::vector<std::size_t> idx;
    for_each_rest({i, j}, [&](Monomial& t, int room) {
      for (int delta = -room; delta <= room; ++delta) {
        const int offset = std::abs(delta);
        const int len = (room - offset) / 2 + 1;
        const auto key = std::make_pair(len, offset);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, two_mode_propagator(len, offset, zeta)).first;
        idx.clear();
        for (int k = 0; k < len; ++k) {
          t[static_cast<std::size_t>(i)] = k + std::max(delta, 0);
          t[static_cast<std::size_t>(j)] = k + std::max(-delta, 0);
          idx.push_back(index_.rank(t));
        }
        apply_block(it->second, idx);
      }
      t[static_cast<std::size_t>(i)] = 0;
      t[static_cast<std::size_t>(j)] = 0;
    });
  }

  int n_;
  int w_;
  TupleIndex index_;
  std::vector<Complex> amps_;
  double deficit_ = 0.0;
};

}  // namespace detail

/// Evolves `initial` (vacuum by default) through the circuit in a Fock space
/// truncated at cutoff + padding total photons and returns the amplitudes with
/// total ≤ cutoff.
inline FockTensor evolve_truncated(const CircuitSpec& spec, int cutoff, const Config& cfg = default_config(),
                                   const std::optional<FockTensor>& initial = std::nullopt,
                                   std::optional<int> padding = std::nullopt) {
  spec.validate(cfg);
  if (cutoff < 1) throw Error(ErrorCode::CutoffTooSmall, "oracle cutoff must be at least 1");
  if (spec.n_modes > cfg.max_oracle_modes) {
    throw Error(ErrorCode::DimensionExplosion, std::to_string(spec.n_modes) + " modes exceed the oracle limit of " +
                                                   std::to_string(cfg.max_oracle_modes));
  }
  const int pad = padding.value_or(cfg.oracle_padding);
  const int working = cutoff + std::max(pad, 0);
  const TupleIndex probe(spec.n_modes, working);
  if (probe.size() > cfg.max_oracle_states) {
    throw Error(ErrorCode::DimensionExplosion,
                "oracle state space of " + std::to_string(probe.size()) + " amplitudes exceeds the configured bound");
  }

  detail::FockWorkspace ws(spec.n_modes, working);
  if (initial) {
    if (initial->n_modes != spec.n_modes) {
      throw Error(ErrorCode::ParameterOutOfRange, "initial state has the wrong number of modes");
    }
    TupleIndex(initial->n_modes, initial->cutoff).for_each([&](const Monomial& t, std::size_t k) {
      if (total_degree(t) <= working) ws.amps()[ws.index().rank(t)] = initial->amplitudes[k];
    });
  } else {
    ws.amps()[0] = 1.0;
  }
  for (const Element& e : spec.elements) ws.apply(e);

  FockTensor out;
  out.n_modes = spec.n_modes;
  out.cutoff = cutoff;
  out.working_cutoff = working;
  out.unitarity_deficit = ws.unitarity_deficit();
  const TupleIndex out_index(spec.n_modes, cutoff);
  out.amplitudes.assign(out_index.size(), 0.0);
  double boundary = 0.0;
  ws.index().for_each([&](const Monomial& t, std::size_t k) {
    const int total = total_degree(t);
    const Complex a = ws.amps()[k];
    if (total <= cutoff) {
      out.amplitudes[out_index.rank(t)] = a;
    } else {
      out.discarded_weight += std::norm(a);
    }
    if (total >= working - 1) boundary += std::norm(a);
  });
  out.boundary_norm = std::sqrt(boundary);
  return out;
}

/// Unnormalized conditional amplitudes over the output modes; the squared norm is the
/// probability of the pattern within the truncation.
inline FockTensor project(const FockTensor& t, const DetectionPattern& pattern) {
  pattern.validate(t.n_modes);
  const int m = static_cast<int>(pattern.detected.size());
  FockTensor out;
  out.n_modes = static_cast<int>(pattern.outputs.size());
  out.cutoff = std::max(t.cutoff - m, 0);
  out.working_cutoff = t.working_cutoff;
  out.boundary_norm = t.boundary_norm;
  out.unitarity_deficit = t.unitarity_deficit;
  const TupleIndex out_index(out.n_modes, out.cutoff);
  out.amplitudes.assign(out_index.size(), 0.0);
  if (m > t.cutoff) return out;
  const TupleIndex full_index(t.n_modes, t.cutoff);
  Monomial full(static_cast<std::size_t>(t.n_modes), 0);
  for (int s : pattern.detected) full[static_cast<std::size_t>(s)] = 1;
  out_index.for_each([&](const Monomial& tuple, std::size_t k) {
    for (std::size_t o = 0; o < pattern.outputs.size(); ++o) full[static_cast<std::size_t>(pattern.outputs[o])] = tuple[o];
    out.amplitudes[k] = t.amplitudes[full_index.rank(full)];
  });
  return out;
}

}  // namespace bellforge
