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

// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
// Usage: acceptance [archive_dir]

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "bellforge/io.hpp"
#include "support.hpp"

namespace bf = bellforge;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome oracle_equivalence() {
  constexpr double kTol = 1e-9;
  constexpr double kSeconds = 60.0;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  int circuits = 0;
  // fixed suite: 30 circuits, 3..6 modes, r ≤ 0.3, detections cycling 0, 1, 2, 3, 4
  for (int k = 0; k < 30; ++k) {
    const int n = 3 + k % 4;
    const int m = std::min(k % 5, n - 1);
    const bf::CircuitSpec spec = bf::testing::random_circuit(rng, n, 3 * n, 0.3);
    std::vector<int> modes(static_cast<std::size_t>(n));
    std::iota(modes.begin(), modes.end(), 0);
    std::shuffle(modes.begin(), modes.end(), rng);
    const std::vector<int> det(modes.begin(), modes.begin() + m);
    worst = std::max(worst, bf::testing::oracle_difference(spec, bf::DetectionPattern::make(n, det), 6));
    ++circuits;
  }
  // the polarisation source itself
  worst = std::max(worst, bf::testing::oracle_difference(bf::pdc_example(0.3), bf::DetectionPattern::make(4, {}), 6));
  ++circuits;
  const double t = seconds_since(t0);
  return {worst <= kTol && t < kSeconds,
          fmt("%d circuits, cutoff 6, max |diff| = %.3e (tol %.0e), %.1f s (limit %.0f s)", circuits, worst, kTol, t,
              kSeconds)};
}

Outcome two_photon_nogo() {
  constexpr double kRelDet = 1e-12;
  std::mt19937_64 rng(1002);
  int failures = 0;
  double worst = 0.0;
  const int trials = 1000;
  for (int k = 0; k < trials; ++k) {
    const int n = 6 + k % 3;
    const bf::GaussianBargmann g = k % 2 ? bf::simulate(bf::testing::random_circuit(rng, n, 4 * n, 0.5))
                                         : bf::GaussianBargmann::from_matrix(bf::testing::random_b(rng, n, 0.1 + 0.0008 * k));
    std::vector<int> modes(static_cast<std::size_t>(n));
    std::iota(modes.begin(), modes.end(), 0);
    std::shuffle(modes.begin(), modes.end(), rng);
    const bf::NoGoCertificate c =
        bf::certify_two_photon_nogo(g, bf::DetectionPattern::make(n, {modes[0], modes[1]}, std::vector<int>(modes.begin() + 2, modes.begin() + 6)));
    const double scale = std::pow(c.m_tilde.norm(), 4);
    const double rel = scale > 0 ? std::abs(c.det_m) / scale : 0.0;
    worst = std::max(worst, rel);
    if (c.rank_m > 2 || rel > kRelDet || c.verdict != bf::Verdict::TwoPhotonNoGo) ++failures;
  }
  return {failures == 0, fmt("%d random states, %d exceptions, max |det M|/|M|^4 = %.3e (tol %.0e)", trials, failures,
                             worst, kRelDet)};
}

Outcome fidelity_ceiling() {
  constexpr double kSlack = 1e-6;
  const double bound = bf::rank2_fidelity_bound();
  double best = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    bf::SearchConfig cfg;
    cfg.n_modes = 6;
    cfg.n_detected = 2;
    cfg.budget = 10000;
    cfg.seed = seed;
    best = std::max(best, bf::optimize(cfg).best_report.bell_fidelity);
  }
  // witness α₀α₁ attains one half
  const bf::BellTarget psi;
  const double witness =
      bf::fidelity_report(bf::polynomial_state(bf::BargmannPolynomial::pair(4, 0, 1)), psi.polynomial(), psi.partition(),
                          {0, false})
          .bell_fidelity;
  return {best <= bound + kSlack && witness >= 0.5 - 1e-15 && bound >= witness,
          fmt("10 seeds x 1e4 evals, best %.9f <= bound %.6f + %.0e; witness %.15f", best, bound, kSlack, witness)};
}

Outcome rate() {
  const bf::RateEstimate r = bf::rate_estimate(1e-4, 1e8, 3);
  const double hours = r.hours_per_event();
  return {std::abs(r.events_per_second - 1e-4) <= 1e-18 && hours >= 1.0 && hours <= 10.0,
          fmt("%.6e events/s, %.2f hours/event (band 1-10 h)", r.events_per_second, hours)};
}

Outcome pair_parity() {
  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(1005);
  double worst = 0.0;
  int tensors = 0;
  for (int k = 0; k < 12; ++k) {
    const int n = 2 + k % 4;
    const bf::CircuitSpec spec = bf::testing::random_circuit(rng, n, 3 * n, 0.6);
    for (int cutoff = 1; cutoff <= 8 - n / 2; ++cutoff) {
      const bf::FockTensor t = bf::evolve_truncated(spec, cutoff);
      bf::TupleIndex(n, cutoff).for_each([&](const bf::Monomial& m, std::size_t idx) {
        if (std::accumulate(m.begin(), m.end(), 0) % 2) worst = std::max(worst, std::abs(t.amplitudes[idx]));
      });
      ++tensors;
    }
    // Bargmann side: odd-degree coefficients of the series vanish identically
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    const bf::ConditionalState c = bf::postselect(bf::simulate(spec), bf::DetectionPattern::make(n, {}, all));
    const bf::TruncatedSeries s = bf::conditional_series(c, 9);
    bf::TupleIndex(n, 9).for_each([&](const bf::Monomial& m, std::size_t idx) {
      if (std::accumulate(m.begin(), m.end(), 0) % 2) worst = std::max(worst, std::abs(s.fock_amplitude(idx)));
    });
  }
  return {worst <= kTol, fmt("%d Fock tensors + series, max odd amplitude %.3e (tol %.0e)", tensors, worst, kTol)};
}

Outcome coherent_only() {
  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(1006);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = 6 + k % 4;
    const bf::ComplexVector d = bf::testing::random_complex(rng, n, 1, 0.8);
    std::vector<int> modes(static_cast<std::size_t>(n));
    std::iota(modes.begin(), modes.end(), 0);
    std::shuffle(modes.begin(), modes.end(), rng);
    const int m = std::min(2 * (k % 3) + k % 2, n - 4);
    const std::vector<int> det(modes.begin(), modes.begin() + m);
    const std::vector<int> out(modes.begin() + m, modes.begin() + m + 4);
    worst = std::max(worst, bf::coherent_only_negative(d, bf::DetectionPattern::make(n, det, out)).entropy_bits);
  }
  return {worst <= kTol, fmt("100 displacements, max entropy %.3e bits (tol %.0e)", worst, kTol)};
}

Outcome four_photon() {
  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(1007);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = 8 + k % 2;
    const bf::GaussianBargmann g = bf::GaussianBargmann::from_matrix(bf::testing::random_b(rng, n, 0.05 + 0.005 * k));
    std::vector<int> modes(static_cast<std::size_t>(n));
    std::iota(modes.begin(), modes.end(), 0);
    std::shuffle(modes.begin(), modes.end(), rng);
    const bf::DetectionPattern p = bf::DetectionPattern::make(n, {modes[0], modes[1], modes[2], modes[3]},
                                                              std::vector<int>(modes.begin() + 4, modes.begin() + 8));
    bf::BargmannPolynomial sum(4);
    for (const auto& t : bf::four_photon_terms(g, p)) sum += t.poly;
    const bf::ConditionalState c = bf::postselect(g, p);
    const double scale = std::max(1.0, std::sqrt(c.poly.fock_norm_squared()));
    bf::BargmannPolynomial diff = sum + c.poly * bf::Complex(-1.0);
    for (const auto& [mono, v] : diff.terms()) worst = std::max(worst, std::abs(v) / scale);
  }
  // sparse structure: with no detector-output coupling only 4(B56 B78 + B57 B68 + B58 B67) survives
  bf::ComplexMatrix b = bf::ComplexMatrix::Zero(8, 8);
  std::mt19937_64 r2(1008);
  const bf::ComplexMatrix blk = bf::testing::random_symmetric(r2, 4, 0.1);
  b.bottomRightCorner(4, 4) = blk;
  b.topLeftCorner(4, 4) = bf::testing::random_symmetric(r2, 4, 0.1);
  const auto terms = bf::four_photon_terms(bf::GaussianBargmann::from_matrix(b), bf::DetectionPattern::make(8, {4, 5, 6, 7}));
  bf::Complex pairing = 0.0;
  bool only_pairings = true;
  for (const auto& t : terms) {
    if (t.kind == bf::FourPhotonTermKind::Pairing) {
      pairing += t.poly.coefficient(bf::Monomial(4, 0));
    } else if (!t.poly.is_zero()) {
      only_pairings = false;
    }
  }
  const bf::Complex expected = 4.0 * (blk(0, 1) * blk(2, 3) + blk(0, 2) * blk(1, 3) + blk(0, 3) * blk(1, 2));
  const double structure = std::abs(pairing - expected);
  return {worst <= kTol && only_pairings && structure <= 1e-15,
          fmt("100 states, max |terms - postselect| %.3e (tol %.0e); sparse pairing error %.1e", worst, kTol, structure)};
}

Outcome round_trips() {
  constexpr double kTol = 1e-10;
  std::mt19937_64 rng(1009);
  double takagi = 0.0;
  double bm = 0.0;
  for (int k = 0; k < 400; ++k) {
    const int n = 1 + k % 8;
    const bf::ComplexMatrix s = bf::testing::random_symmetric(rng, n, std::pow(10.0, k % 5 - 2));
    const bf::TakagiFactorization t = bf::takagi_decompose(s);
    takagi = std::max({takagi, (t.reconstruct() - s).norm() / std::max(1.0, s.norm()), bf::unitarity_residual(t.W)});
    const bf::BogoliubovTransform u = bf::compile(bf::testing::random_circuit(rng, n + 1, 3 * n + 3, 0.8));
    const bf::BogoliubovTransform back = bf::bloch_messiah(u).recompose();
    bm = std::max({bm, (back.E - u.E).norm(), (back.F - u.F).norm()});
  }
  return {takagi <= kTol && bm <= kTol,
          fmt("400 inputs n<=8, Takagi residual %.3e, Bloch-Messiah residual %.3e (tol %.0e)", takagi, bm, kTol)};
}

Outcome determinism() {
  bf::SearchConfig cfg;
  cfg.n_modes = 8;
  cfg.n_detected = 4;
  cfg.budget = 6000;
  cfg.seed = 99;
  cfg.evals_per_start = 1000;
  const std::string a = bf::io::to_json(bf::optimize(cfg, 1), false).dump();
  const std::string b = bf::io::to_json(bf::optimize(cfg, 8), false).dump();
  return {a == b, fmt("threads 1 vs 8: %zu vs %zu bytes, %s", a.size(), b.size(), a == b ? "identical" : "different")};
}

Outcome four_detection_property(const std::filesystem::path& archive) {
  constexpr double kSeconds = 600.0;
  bf::SearchConfig cfg;  // 8 modes, 4 detections, xi_cap 0.3
  cfg.budget = 100000;
  cfg.seed = 20261015;
  const auto t0 = std::chrono::steady_clock::now();
  const bf::SearchResult r = bf::optimize(cfg);
  const double t = seconds_since(t0);
  std::filesystem::create_directories(archive);
  std::ofstream(archive / "four_detection_trace.csv") << bf::io::trace_csv(r.trace);
  bf::io::json j{{"config", bf::io::to_json(cfg)}, {"result", bf::io::to_json(r, true)}};
  std::ofstream(archive / "four_detection_result.json") << j.dump(2) << '\n';
  bool monotone = true;
  for (std::size_t k = 1; k < r.trace.size(); ++k) monotone = monotone && r.trace[k].best_fidelity >= r.trace[k - 1].best_fidelity;
  return {t < kSeconds && r.evaluations == cfg.budget && monotone && !r.trace.empty(),
          fmt("budget 1e5 in %.1f s (limit %.0f s), seed %llu, best fidelity %.6f, archived to %s", t, kSeconds,
              static_cast<unsigned long long>(cfg.seed), r.best_report.bell_fidelity, archive.string().c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path archive = argc > 1 ? argv[1] : "acceptance_archive";
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 oracle equivalence", oracle_equivalence},
      {"2 two-photon no-go", two_photon_nogo},
      {"3 fidelity ceiling", fidelity_ceiling},
      {"4 rate estimate", rate},
      {"5 pair parity", pair_parity},
      {"6 coherent-only negative", coherent_only},
      {"7 four-photon expansion", four_photon},
      {"8 Takagi/Bloch-Messiah round trips", round_trips},
      {"9 determinism", determinism},
      {"10 four-detection search property", [&] { return four_detection_property(archive); }},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o{false, ""};
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s  %-36s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
