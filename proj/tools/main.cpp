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

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace silmarillion::cli;

  CLI::App app{"Silmarillion risk notification simulator and tools"};
  app.require_subcommand(1);

  SimulateConfig sim;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write metrics");
  simulate->add_option("--scenario", sim.scenario, "Scenario JSON file")->required();
  simulate->add_option("--seed", sim.seed, "Master seed")->required();
  simulate->add_option("--out", sim.out_dir, "Output directory")->required();

  DpTableConfig dp;
  auto* dp_table = app.add_subcommand("dp-table", "Empirical 99th percentile of the junk count");
  dp_table->add_option("--epsilon", dp.epsilons, "Comma-separated epsilons")->delimiter(',')->capture_default_str();
  dp_table->add_option("--delta", dp.deltas, "Comma-separated deltas")->delimiter(',')->capture_default_str();
  dp_table->add_option("--sensitivity", dp.sensitivity, "Per-user contribution bound A")->capture_default_str();
  dp_table->add_option("--samples", dp.samples, "Draws per cell")->capture_default_str();
  dp_table->add_option("--seed", dp.seed, "Seed")->capture_default_str();

  PirBenchConfig pb;
  bool no_dedup = false;
  auto* pir_bench = app.add_subcommand("pir-bench", "PIR correctness and XOR throughput");
  pir_bench->add_option("--tiles", pb.tiles, "L-tiles in the database (power of two)")->capture_default_str();
  pir_bench->add_option("--block-cap", pb.block_cap, "Block cap in bytes")->capture_default_str();
  pir_bench->add_option("--trials", pb.trials, "Timed random queries")->capture_default_str();
  pir_bench->add_option("--seed", pb.seed, "Seed")->capture_default_str();
  pir_bench->add_flag("--no-dedup", no_dedup, "Serve one block per L-tile");
  pir_bench->add_option("--workers", pb.workers, "Worker threads")->capture_default_str();
  pir_bench->add_option("--epsilon", pb.epsilon, "DP epsilon for block noise")->capture_default_str();
  pir_bench->add_option("--delta", pb.delta, "DP delta for block noise")->capture_default_str();
  pir_bench->add_option("--sensitivity", pb.sensitivity, "DP sensitivity for block noise")->capture_default_str();

  MakeScenarioConfig ms;
  auto* make = app.add_subcommand("make-scenario", "Write a generated scenario as JSON");
  make->add_option("--kind", ms.kind, "pilot or random")->capture_default_str();
  make->add_option("--seed", ms.seed, "Generator seed")->capture_default_str();
  make->add_option("--out", ms.out, "Output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  if (simulate->parsed()) return cmd_simulate(sim, std::cout, std::cerr);
  if (dp_table->parsed()) return cmd_dp_table(dp, std::cout, std::cerr);
  if (pir_bench->parsed()) {
    pb.dedup = !no_dedup;
    return cmd_pir_bench(pb, std::cout, std::cerr);
  }
  return cmd_make_scenario(ms, std::cout, std::cerr);
}
