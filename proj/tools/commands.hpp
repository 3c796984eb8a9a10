// Copyright 2026 The Silmarillion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace silmarillion::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBadInput = 2;    // missing or invalid scenario, bad parameters
inline constexpr int kExitRunError = 3;    // capacity or backend failure during a run

struct SimulateConfig {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string out_dir;
};

struct DpTableConfig {
  std::vector<double> epsilons{0.5, 0.2, 0.1, 0.05};
  std::vector<double> deltas{0.001, 0.01};
  std::uint32_t sensitivity = 2016;
  std::size_t samples = 1000000;
  std::uint64_t seed = 1;
};

struct PirBenchConfig {
  std::uint32_t tiles = 64;
  std::size_t block_cap = 4096;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  bool dedup = true;
  std::size_t workers = 1;
  double epsilon = 1.0;
  double delta = 0.1;
  std::uint32_t sensitivity = 2;
};

struct MakeScenarioConfig {
  std::string kind = "pilot";  // pilot or random
  std::uint64_t seed = 1;
  std::string out;
};

// Each writes its report to `out` and diagnostics to `err`.
int cmd_simulate(const SimulateConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_dp_table(const DpTableConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_pir_bench(const PirBenchConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_make_scenario(const MakeScenarioConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace silmarillion::cli
