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

// bellforge: command-line front end. Every JSON output carries a "manifest"
// object (command, config echo, seed, version, input hashes, timestamp).
//
// Exit codes: 0 success, 2 validation or usage error, 3 numeric failure.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "bellforge/io.hpp"

namespace {

using bellforge::io::json;
namespace bf = bellforge;

struct Globals {
  bool pretty = false;
  bool reproducible = false;
  int threads = 0;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
  return os.str();
}

class Run {
 public:
  Run(std::string command, const Globals& g) : command_(std::move(command)), g_(g) {}

  /// Reads an input file, remembering its hash for the manifest.
  json load(const std::string& path, const std::string& what) {
    if (!std::filesystem::exists(path)) throw UsageError(what + " file '" + path + "' not found");
    const std::string text = bf::io::read_file(path);
    hashes_[path] = sha256_hex(text);
    return bf::io::parse(text, what + " '" + path + "'");
  }

  json& config() { return config_; }
  void seed(std::uint64_t s) { seed_ = s; }

  json manifest() const {
    json m;
    m["command"] = command_;
    m["config"] = config_;
    if (seed_) {
      m["seed"] = *seed_;
    } else {
      m["seed"] = nullptr;
    }
    m["tool_version"] = bf::io::kToolVersion;
    json h = json::object();
    for (const auto& [path, digest] : hashes_) h[path] = digest;
    m["input_hashes"] = h;
    m["timestamp"] = timestamp();
    return m;
  }

  /// Writes `body` with the manifest appended, to `out` or stdout.
  void emit(json body, const std::string& out) const {
    body["manifest"] = manifest();
    const std::string text = g_.pretty ? body.dump(2) : body.dump();
    if (out.empty() || out == "-") {
      std::cout << text << '\n';
      return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + out + "'");
    f << text << '\n';
  }

 private:
  std::string timestamp() const {
    std::time_t t = 0;
    if (g_.reproducible) {
      if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    } else {
      t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  std::string command_;
  const Globals& g_;
  json config_ = json::object();
  std::optional<std::uint64_t> seed_;
  std::map<std::string, std::string> hashes_;
};

bf::DetectionPattern pattern_for(int n_modes, const std::vector<int>& detect, const std::vector<int>& outputs) {
  if (outputs.empty()) return bf::DetectionPattern::make(n_modes, detect);
  return bf::DetectionPattern::make(n_modes, detect, outputs);
}

unsigned resolve_threads(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("BELLFORGE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
    throw UsageError("BELLFORGE_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string format_duration(double seconds) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  if (seconds >= 3600.0) {
    os << seconds / 3600.0 << " hours/event";
  } else if (seconds >= 60.0) {
    os << seconds / 60.0 << " minutes/event";
  } else {
    os << seconds << " seconds/event";
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-selected linear-optical entanglement: simulation, no-go certificates and search"};
  app.set_version_flag("--version", bf::io::kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--pretty", g.pretty, "Indent JSON output");
  app.add_flag("--reproducible", g.reproducible,
               "Drop wall-clock fields and pin the manifest timestamp to SOURCE_DATE_EPOCH (or 0)");
  app.add_option("--threads", g.threads, "Worker threads for search (default: BELLFORGE_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  std::string circuit, state, conditional, config, out, report, target = "psi-minus", trace;
  std::vector<int> detect, outputs;
  int cutoff = 0;
  int padding = -1;
  double xi2 = 0, rep_rate = 0, efficiency = 1.0;
  int pairs = 0;
  std::optional<int> n_detected;

  auto* simulate = app.add_subcommand("simulate", "Compile a circuit and derive its Gaussian state B");
  simulate->add_option("--circuit", circuit, "Circuit JSON")->required();
  simulate->add_option("--out", out, "Output state JSON (default stdout)");

  auto* postselect = app.add_subcommand("postselect", "Condition a state on one photon per detected mode");
  postselect->add_option("--state", state, "State JSON")->required();
  postselect->add_option("--detect", detect, "Detected modes, comma separated")->delimiter(',');
  postselect->add_option("--outputs", outputs, "Output modes (default: first four undetected)")->delimiter(',');
  postselect->add_option("--out", out, "Output conditional JSON (default stdout)");

  auto* entangle = app.add_subcommand("entangle", "Bell fidelity, vacuum weight and entropy of a conditional state");
  entangle->add_option("--conditional", conditional, "Conditional state JSON")->required();
  entangle->add_option("--target", target, "psi-minus | psi-plus | phi-minus | phi-plus");
  entangle->add_option("--cutoff", cutoff, "Per-side photon cap for the entropy (0 = automatic)");
  entangle->add_option("--report", out, "Output report JSON (default stdout)");

  auto* certify = app.add_subcommand("certify", "Two-photon no-go certificate");
  certify->add_option("--state", state, "State JSON")->required();
  certify->add_option("--detect", detect, "The two detected modes i,j")->delimiter(',')->required();
  certify->add_option("--outputs", outputs, "The four output modes")->delimiter(',');
  certify->add_option("--out", out, "Output certificate JSON (default stdout)");

  auto* four = app.add_subcommand("four-terms", "Structured ten-term expansion for four detections");
  four->add_option("--state", state, "State JSON")->required();
  four->add_option("--detect", detect, "The four detected modes")->delimiter(',')->required();
  four->add_option("--outputs", outputs, "Output modes")->delimiter(',');
  four->add_option("--out", out, "Output JSON (default stdout)");

  auto* search = app.add_subcommand("search", "Multi-start search for the best conditional Bell fidelity");
  search->add_option("--config", config, "Search config JSON")->required();
  search->add_option("--out", out, "Output result JSON (default stdout)");
  search->add_option("--trace", trace, "Also write the best-so-far trace as CSV");

  auto* rate = app.add_subcommand("rate", "Heralded-pair rate estimate");
  rate->add_option("--xi2", xi2, "Pair probability per mode and pulse")->required();
  rate->add_option("--rep-rate", rep_rate, "Repetition rate in Hz")->required();
  rate->add_option("--pairs", pairs, "Pairs that must be created at once")->required();
  rate->add_option("--efficiency", efficiency, "Detector efficiency (default 1)");
  rate->add_option("--detected", n_detected, "Detected photons (default 2*pairs - 2)");

  auto* oracle = app.add_subcommand("oracle-diff", "Compare Bargmann amplitudes with the truncated Fock oracle");
  oracle->add_option("--circuit", circuit, "Circuit JSON")->required();
  oracle->add_option("--cutoff", cutoff, "Total photon cutoff")->required();
  oracle->add_option("--detect", detect, "Optional detected modes")->delimiter(',');
  oracle->add_option("--outputs", outputs, "Output modes when detecting")->delimiter(',');
  oracle->add_option("--padding", padding, "Extra photons kept inside the oracle (default 24)");
  oracle->add_option("--out", out, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << " (see --help)\n";
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Run run(command, g);
  try {
    if (command == "simulate") {
      run.config()["circuit"] = circuit;
      const bf::CircuitSpec spec = bf::io::circuit_from_json(run.load(circuit, "circuit"));
      const bf::GaussianBargmann s = bf::simulate(spec);
      json body = bf::io::to_json(s);
      body["circuit"] = bf::io::to_json(spec);
      run.emit(body, out);
    } else if (command == "postselect") {
      run.config()["state"] = state;
      run.config()["detect"] = detect;
      run.config()["outputs"] = outputs;
      const bf::GaussianBargmann s = bf::io::state_from_json(run.load(state, "state"));
      const auto pattern = pattern_for(static_cast<int>(s.n_modes()), detect, outputs);
      run.emit(bf::io::to_json(bf::postselect(s, pattern)), out);
    } else if (command == "entangle") {
      run.config()["conditional"] = conditional;
      run.config()["target"] = target;
      run.config()["cutoff"] = cutoff;
      const bf::ConditionalState c = bf::io::conditional_from_json(run.load(conditional, "conditional"));
      bf::BellTarget t;
      t.state = bf::bell_state_from_string(target);
      bf::FidelityOptions opts;
      opts.cutoff = cutoff;
      run.emit(bf::io::to_json(bf::bell_fidelity(c, t, opts)), out);
    } else if (command == "certify") {
      run.config()["state"] = state;
      run.config()["detect"] = detect;
      run.config()["outputs"] = outputs;
      const bf::GaussianBargmann s = bf::io::state_from_json(run.load(state, "state"));
      const auto pattern = pattern_for(static_cast<int>(s.n_modes()), detect, outputs);
      run.emit(bf::io::to_json(bf::certify_two_photon_nogo(s, pattern)), out);
    } else if (command == "four-terms") {
      run.config()["state"] = state;
      run.config()["detect"] = detect;
      run.config()["outputs"] = outputs;
      const bf::GaussianBargmann s = bf::io::state_from_json(run.load(state, "state"));
      const auto pattern = pattern_for(static_cast<int>(s.n_modes()), detect, outputs);
      const auto terms = bf::four_photon_terms(s, pattern);
      bf::BargmannPolynomial sum(static_cast<int>(pattern.outputs.size()));
      for (const auto& t : terms) sum += t.poly;
      run.emit(json{{"outputs", pattern.outputs}, {"terms", bf::io::to_json(terms)}, {"sum", bf::io::to_json(sum)}}, out);
    } else if (command == "search") {
      run.config()["config"] = config;
      const bf::SearchConfig cfg = bf::io::search_config_from_json(run.load(config, "search config"));
      run.config()["search"] = bf::io::to_json(cfg);
      run.seed(cfg.seed);
      const bf::SearchResult r = bf::optimize(cfg, resolve_threads(g.threads));
      json body = bf::io::to_json(r, !g.reproducible);
      body["config"] = bf::io::to_json(cfg);
      run.emit(body, out);
      if (!trace.empty()) {
        std::ofstream f(trace, std::ios::binary);
        if (!f) throw UsageError("cannot write '" + trace + "'");
        f << bf::io::trace_csv(r.trace);
      }
    } else if (command == "rate") {
      run.config() = json{{"xi2", xi2}, {"rep_rate_hz", rep_rate}, {"n_pairs", pairs}, {"detector_efficiency", efficiency}};
      if (n_detected) run.config()["n_detected"] = *n_detected;
      const bf::RateEstimate r = bf::rate_estimate(xi2, rep_rate, pairs, efficiency, n_detected);
      run.emit(json{{"events_per_second", r.events_per_second},
                    {"seconds_per_event", r.seconds_per_event},
                    {"hours_per_event", r.hours_per_event()},
                    {"summary", format_duration(r.seconds_per_event)}},
               out);
    } else if (command == "oracle-diff") {
      run.config()["circuit"] = circuit;
      run.config()["cutoff"] = cutoff;
      run.config()["detect"] = detect;
      run.config()["outputs"] = outputs;
      run.config()["padding"] = padding;
      const bf::CircuitSpec spec = bf::io::circuit_from_json(run.load(circuit, "circuit"));
      const bf::GaussianBargmann s = bf::simulate(spec);
      std::optional<int> pad;
      if (padding >= 0) pad = padding;
      const bf::FockTensor full = bf::evolve_truncated(spec, cutoff, bf::default_config(), std::nullopt, pad);
      const auto pattern = detect.empty() && outputs.empty()
                               ? bf::DetectionPattern::make(spec.n_modes, {}, [&] {
                                   std::vector<int> all(static_cast<std::size_t>(spec.n_modes));
                                   for (int k = 0; k < spec.n_modes; ++k) all[static_cast<std::size_t>(k)] = k;
                                   return all;
                                 }())
                               : pattern_for(spec.n_modes, detect, outputs);
      const bf::FockTensor projected = bf::project(full, pattern);
      const bf::ConditionalState c = bf::postselect(s, pattern);
      const bf::TruncatedSeries series = bf::conditional_series(c, projected.cutoff);
      // U|0⟩ carries a global phase the Bargmann form does not; align on the vacuum amplitude
      const bf::Complex vac = full.amplitudes[0];
      const bf::Complex phase = std::abs(vac) > 0 ? std::conj(vac) / std::abs(vac) : bf::Complex(1.0);
      double max_diff = 0.0;
      bf::TupleIndex(projected.n_modes, projected.cutoff).for_each([&](const bf::Monomial& m, std::size_t k) {
        const bf::Complex a = series.fock_amplitude(series.rank(m)) / s.norm;
        max_diff = std::max(max_diff, std::abs(a - phase * projected.amplitudes[k]));
      });
      run.emit(json{{"cutoff", cutoff},
                    {"compared_cutoff", projected.cutoff},
                    {"n_amplitudes", projected.amplitudes.size()},
                    {"max_abs_diff", max_diff},
                    {"within_tolerance", max_diff <= 1e-9},
                    {"oracle",
                     {{"working_cutoff", full.working_cutoff},
                      {"discarded_weight", full.discarded_weight},
                      {"boundary_norm", full.boundary_norm},
                      {"unitarity_deficit", full.unitarity_deficit}}}},
               out);
      std::cerr << "max amplitude diff " << max_diff << '\n';
    }
  } catch (const bf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return bf::is_numeric_failure(e.code()) ? 3 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
