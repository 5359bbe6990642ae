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

#include <cstddef>

namespace bellforge {

/// Numerical tolerances and size limits shared by every module.
struct Config {
  // linalg-core
  double symmetry_tol = 1e-12;
  double takagi_reconstruction_tol = 1e-10;
  double unitarity_tol = 1e-12;
  double symplectic_tol = 1e-10;
  double not_symplectic_tol = 1e-9;

  // circuit
  double max_squeeze = 5.0;

  // bargmann-engine
  int max_detections = 10;

  // fock-oracle
  int max_oracle_modes = 8;
  std::size_t max_oracle_states = 20'000'000;
  int oracle_padding = 24;

  // entanglement
  double normalization_tol = 1e-9;
  double pollution_epsilon = 0.01;

  // certificates
  double det_zero_relative = 1e-12;
  double rank_relative = 1e-10;
};

inline const Config& default_config() {
  static const Config config{};
  return config;
}

}  // namespace bellforge
