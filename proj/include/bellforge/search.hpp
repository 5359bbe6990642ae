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
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "bellforge/bargmann.hpp"
#include "bellforge/certificates.hpp"
#include "bellforge/circuit.hpp"
#include "bellforge/config.hpp"
#include "bellforge/entanglement.hpp"
#include "bellforge/error.hpp"

namespace bellforge {

enum class Objective { FullFidelity, SectorFidelity };

inline std::string_view to_string(Objective o) {
  return o == Objective::FullFidelity ? "full_fidelity" : "sector_fidelity";
}

inline Objective objective_from_string(std::string_view s) {
  if (s == "full_fidelity") return Objective::FullFidelity;
  if (s == "sector_fidelity") return Objective::SectorFidelity;
  throw Error(ErrorCode::SchemaViolation,
              "unknown objective '" + std::string(s) + "' (expected full_fidelity or sector_fidelity)");
}

struct SearchConfig {
  int n_modes = 8;
  int n_detected = 4;
  double xi_cap = 0.3;
  std::uint64_t budget = 10000;
  std::uint64_t seed = 1;
  Objective objective = Objective::FullFidelity;
  /// Evaluations per multi-start; the budget is split into ceil(budget / evals_per_start) starts.
  std::uint64_t evals_per_start = 2500;

  void validate() const {
    if (budget == 0) throw Error(ErrorCode::BudgetZero, "search budget must be positive");
    if (n_detected < 0 || n_detected % 2 != 0) {
      throw Error(ErrorCode::InfeasibleConfig,
                  "n_detected must be a non-negative even number (odd detections cannot herald a Bell pair)");
    }
    if (n_modes < 4 + n_detected) {
      throw Error(ErrorCode::InfeasibleConfig, "n_modes must be at least 4 + n_detected");
    }
    if (n_detected > 10) throw Error(ErrorCode::TooManyDetections, "search supports at most 10 detections");
    if (!(xi_cap > 0.0 && xi_cap < 1.0)) throw Error(ErrorCode::ParameterOutOfRange, "xi_cap must lie in (0, 1)");
    if (evals_per_start == 0) throw Error(ErrorCode::ParameterOutOfRange, "evals_per_start must be positive");
  }
};

struct TracePoint {
  std::uint64_t eval_index = 0;
  double best_fidelity = 0.0;
  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct SearchResult {
  GaussianBargmann best_state;
  std::vector<double> best_params;
  EntanglementReport best_report;
  std::vector<TracePoint> trace;
  std::uint64_t evaluations = 0;
  std::uint64_t starts = 0;
  double wall_time = 0.0;
};

/// Bloch–Messiah normal form from vacuum: B = ½ W diag(λ) Wᵀ with λ_k = xi_cap·sin²(x_k)
/// and W a product of phases and Givens rotations. Layout of x: N squeezing angles,
/// N phases, then a (θ, φ) pair per mode pair i < j.
inline std::size_t parameter_count(int n_modes) {
  return static_cast<std::size_t>(n_modes) * static_cast<std::size_t>(n_modes + 1);
}

inline ComplexMatrix parameterized_unitary(int n, const double* x) {
  ComplexMatrix w = ComplexMatrix::Identity(n, n);
  for (int k = 0; k < n; ++k) w(k, k) = std::polar(1.0, x[k]);
  const double* g = x + n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double c = std::cos(g[0]);
      const Complex s = std::polar(std::sin(g[0]), g[1]);
      g += 2;
      for (int r = 0; r < n; ++r) {
        const Complex wi = w(r, i);
        const Complex wj = w(r, j);
        w(r, i) = c * wi - std::conj(s) * wj;
        w(r, j) = s * wi + c * wj;
      }
    }
  }
  return w;
}

inline ComplexMatrix parameterized_b(int n, double xi_cap, const std::vector<double>& x) {
  RealVector lambda(n);
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(x[static_cast<std::size_t>(k)]);
    lambda(k) = xi_cap * s * s;
  }
  const ComplexMatrix w = parameterized_unitary(n, x.data() + n);
  const ComplexMatrix b = 0.5 * w * lambda.asDiagonal() * w.transpose();
  return 0.5 * (b + b.transpose());
}

/// Detected modes are the last n_detected; outputs are 0..3; anything else is measured in vacuum.
inline DetectionPattern search_pattern(const SearchConfig& cfg) {
  std::vector<int> detected;
  for (int k = cfg.n_modes - cfg.n_detected; k < cfg.n_modes; ++k) detected.push_back(k);
  return DetectionPattern::make(cfg.n_modes, detected, std::vector<int>{0, 1, 2, 3});
}

inline EntanglementReport evaluate_b(const ComplexMatrix& b, const DetectionPattern& pattern, bool with_entropy,
                                     const Config& cfg = default_config()) {
  const ConditionalState c = postselect_exponential(b, ComplexVector(), 1.0, pattern, cfg);
  FidelityOptions opts;
  opts.with_entropy = with_entropy;
  return bell_fidelity(c, BellTarget{}, opts, cfg);
}

namespace detail {

struct StartOutcome {
  std::vector<double> best_x;
  double best = -1.0;
  std::vector<TracePoint> improvements;  // local eval indices
};

/// Compass search with step halving; when the step collapses the incumbent is
/// kicked randomly and the search resumes. Deterministic given (seed, start).
inline StartOutcome run_start(const SearchConfig& cfg, const DetectionPattern& pattern, std::uint64_t start,
                              std::uint64_t evals, const Config& base) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(start >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> kick(0.0, 0.5);
  const std::size_t dim = parameter_count(cfg.n_modes);

  StartOutcome out;
  std::uint64_t used = 0;
  auto evaluate = [&](const std::vector<double>& x) -> double {
    const EntanglementReport r = evaluate_b(parameterized_b(cfg.n_modes, cfg.xi_cap, x), pattern, false, base);
    const double f = cfg.objective == Objective::FullFidelity ? r.bell_fidelity : r.sector_fidelity;
    ++used;
    if (f > out.best) {
      out.best = f;
      out.best_x = x;
      out.improvements.push_back({used - 1, f});
    }
    return f;
  };

  std::vector<double> x(dim);
  for (double& v : x) v = angle(rng);
  double fx = evaluate(x);
  double step = 0.5;
  while (used < evals) {
    bool improved = false;
    for (std::size_t k = 0; k < dim && used < evals; ++k) {
      for (double dir : {1.0, -1.0}) {
        if (used >= evals) break;
        std::vector<double> y = x;
        y[k] += dir * step;
        const double fy = evaluate(y);
        if (fy > fx) {
          x = std::move(y);
          fx = fy;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
    if (step < 1e-4 && used < evals) {
      x = out.best_x;
      for (double& v : x) v += kick(rng);
      fx = evaluate(x);
      step = 0.5;
    }
  }
  return out;
}

}  // namespace detail

/// Multi-start derivative-free maximization of the Bell fidelity after detecting one
/// photon in each of the last n_detected modes. Starts run on `threads` workers and
/// are merged in start order, so the result does not depend on the thread count.
inline SearchResult optimize(const SearchConfig& cfg, unsigned threads = 1, const Config& base = default_config()) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const DetectionPattern pattern = search_pattern(cfg);
  const std::uint64_t n_starts = (cfg.budget + cfg.evals_per_start - 1) / cfg.evals_per_start;
  std::vector<detail::StartOutcome> outcomes(static_cast<std::size_t>(n_starts));
  auto evals_for = [&](std::uint64_t s) {
    return s + 1 < n_starts ? cfg.evals_per_start : cfg.budget - cfg.evals_per_start * (n_starts - 1);
  };

  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t s = next++; s < n_starts; s = next++) {
      outcomes[static_cast<std::size_t>(s)] = detail::run_start(cfg, pattern, s, evals_for(s), base);
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_starts)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  SearchResult r;
  r.starts = n_starts;
  r.evaluations = cfg.budget;
  double best = -1.0;
  std::uint64_t offset = 0;
  for (std::uint64_t s = 0; s < n_starts; ++s) {
    const auto& o = outcomes[static_cast<std::size_t>(s)];
    for (const TracePoint& p : o.improvements) {
      if (p.best_fidelity > best) {
        best = p.best_fidelity;
        r.trace.push_back({offset + p.eval_index, p.best_fidelity});
      }
    }
    offset += evals_for(s);
  }
  // earliest start attaining the overall best
  for (std::uint64_t s = 0; s < n_starts; ++s) {
    const auto& o = outcomes[static_cast<std::size_t>(s)];
    if (o.best == best) {
      r.best_params = o.best_x;
      break;
    }
  }
  r.best_state = GaussianBargmann::from_matrix(parameterized_b(cfg.n_modes, cfg.xi_cap, r.best_params), base);
  r.best_report = evaluate_b(r.best_state.B, pattern, true, base);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct RateEstimate {
  double events_per_second = 0.0;
  double seconds_per_event = 0.0;
  double hours_per_event() const { return seconds_per_event / 3600.0; }
};

/// rep_rate · xi2^{n_pairs} · efficiency^{n_detected}; n_detected defaults to 2·n_pairs − 2
/// (every pair but the heralded one is detected).
inline RateEstimate rate_estimate(double xi2, double rep_rate_hz, int n_pairs, double detector_efficiency = 1.0,
                                  std::optional<int> n_detected = std::nullopt) {
  if (!(xi2 > 0.0 && xi2 < 1.0)) throw Error(ErrorCode::ParameterOutOfRange, "xi2 must lie in (0, 1)");
  if (!(rep_rate_hz > 0.0) || !std::isfinite(rep_rate_hz)) {
    throw Error(ErrorCode::ParameterOutOfRange, "rep_rate_hz must be positive");
  }
  if (n_pairs < 1) throw Error(ErrorCode::ParameterOutOfRange, "n_pairs must be at least 1");
  if (!(detector_efficiency > 0.0 && detector_efficiency <= 1.0)) {
    throw Error(ErrorCode::ParameterOutOfRange, "detector_efficiency must lie in (0, 1]");
  }
  const int detected = n_detected.value_or(2 * n_pairs - 2);
  if (detected < 0) throw Error(ErrorCode::ParameterOutOfRange, "n_detected must be non-negative");
  RateEstimate r;
  r.events_per_second = rep_rate_hz * std::pow(xi2, n_pairs) * std::pow(detector_efficiency, detected);
  r.seconds_per_event = 1.0 / r.events_per_second;
  return r;
}

}  // namespace bellforge
