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

#include <gtest/gtest.h>

#include <optional>
#include <random>

#include "bellforge/io.hpp"
#include "support.hpp"

namespace bellforge {
namespace {

using io::json;

std::optional<ErrorCode> code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

TEST(Io, FloatsRoundTripExactly) {
  std::mt19937_64 rng(40);
  const ComplexMatrix m = testing::random_complex(rng, 5, 3, 1e-3);
  const ComplexMatrix back = io::matrix_from_json(json::parse(io::to_json(m).dump()), "m");
  EXPECT_EQ(back, m);
  const Complex z(0.1 + 0.2, -1.0 / 3.0);
  EXPECT_EQ(io::complex_from_json(json::parse(io::to_json(z).dump()), "z"), z);
}

TEST(Io, CircuitRoundTrip) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    CircuitSpec spec = testing::random_circuit(rng, 5, 12, 0.3);
    if (trial == 0) spec.mode_labels = {"a", "b", "c", "d", "e"};
    const CircuitSpec back = io::circuit_from_json(json::parse(io::to_json(spec).dump()));
    EXPECT_EQ(io::to_json(back).dump(), io::to_json(spec).dump());
    EXPECT_EQ(compile(back).E, compile(spec).E);
  }
}

TEST(Io, StateRoundTrip) {
  const GaussianBargmann g = simulate(pdc_example(0.1));
  const GaussianBargmann back = io::state_from_json(json::parse(io::to_json(g).dump()));
  EXPECT_EQ(back.B, g.B);
  EXPECT_EQ(back.norm, g.norm);
}

TEST(Io, ConditionalRoundTrip) {
  std::mt19937_64 rng(42);
  const ComplexMatrix b = testing::random_b(rng, 6, 0.4);
  const ConditionalState c = postselect_exponential(b, testing::random_complex(rng, 6, 1, 0.2), 1.0,
                                                    DetectionPattern::make(6, {4, 5}));
  const ConditionalState back = io::conditional_from_json(json::parse(io::to_json(c).dump()));
  EXPECT_EQ(back.poly, c.poly);
  EXPECT_EQ(back.residual_B, c.residual_B);
  EXPECT_EQ(back.residual_linear, c.residual_linear);
  EXPECT_EQ(back.pattern.outputs, c.pattern.outputs);
  EXPECT_EQ(io::to_json(back).dump(), io::to_json(c).dump());
}

TEST(Io, SearchConfigRoundTrip) {
  SearchConfig cfg;
  cfg.seed = 0xfedcba9876543210ull;
  cfg.objective = Objective::SectorFidelity;
  const SearchConfig back = io::search_config_from_json(json::parse(io::to_json(cfg).dump()));
  EXPECT_EQ(io::to_json(back), io::to_json(cfg));
  EXPECT_EQ(back.seed, cfg.seed);
}

TEST(Io, TraceCsv) {
  const std::vector<TracePoint> trace{{0, 0.25}, {17, 0.1 + 0.2}};
  EXPECT_EQ(io::trace_csv(trace), "eval_index,best_fidelity\n0,0.25\n17,0.30000000000000004\n");
}

TEST(Io, SchemaViolations) {
  EXPECT_EQ(code_of([] { io::circuit_from_json(json::parse(R"({"elements": []})")); }), ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([] { io::circuit_from_json(json::parse(R"({"n_modes": 2, "elements": [{"kind": "mirror", "modes": [0], "params": {}}]})")); }),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([] { io::circuit_from_json(json::parse(R"({"n_modes": 2, "elements": [{"kind": "beam_splitter", "modes": [0], "params": {"theta": 1}}]})")); }),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([] { io::circuit_from_json(json::parse(R"({"n_modes": 2, "elements": [{"kind": "phase_shifter", "modes": [0], "params": {"phi": "x"}}]})")); }),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([] { io::state_from_json(json::parse(R"({"B": [[{"re": 0, "im": 0}], []]})")); }), ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([] { io::search_config_from_json(json::parse(R"({"n_modes": 8, "n_detected": 4, "xi_cap": 0.3, "budget": -1, "seed": 1})")); }),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([] { io::search_config_from_json(json::parse(R"({"n_modes": 8, "n_detected": 4, "xi_cap": 0.3, "budget": 1, "seed": 1, "objective": "best"})")); }),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([] { io::parse("{", "input"); }), ErrorCode::SchemaViolation);
}

TEST(Io, ViolationMessageNamesTheField) {
  try {
    io::circuit_from_json(json::parse(R"({"n_modes": 2, "elements": [{"kind": "beam_splitter", "modes": [0, 1], "params": {}}]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("circuit.elements[0].params"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace bellforge
