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

#include "commands.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <thread>

#include "silmarillion/core/errors.hpp"
#include "silmarillion/core/rng.hpp"
#include "silmarillion/pir/pir_db.hpp"
#include "silmarillion/pir/pir_query.hpp"
#include "silmarillion/privacy/dp_noise.hpp"
#include "silmarillion/simnet/bandwidth.hpp"
#include "silmarillion/simnet/scenario.hpp"
#include "silmarillion/simnet/simulator.hpp"

namespace silmarillion::cli {

namespace {

bool write_file(const std::filesystem::path& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    err << "error: cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

SigningKey bench_key(Rng& rng) {
  std::array<std::uint8_t, 32> seed{};
  rng.fill(seed);
  return SigningKey::from_seed(seed);
}

// Splits log2(tiles) bits into M and L widths, at least one bit each.
TilingParams bench_tiling(std::uint32_t tiles) {
  const auto k = static_cast<unsigned>(std::countr_zero(tiles));
  const unsigned m = std::max(1u, k / 3);
  return TilingParams{32 - k, m, k - m};
}

Bytes padded(const Bytes& block, std::size_t size) {
  Bytes b = block;
  b.resize(size, 0);
  return b;
}

}  // namespace

int cmd_simulate(const SimulateConfig& cfg, std::ostream& out, std::ostream& err) {
  simnet::Scenario s;
  try {
    s = simnet::load_scenario(cfg.scenario);
  } catch (const simnet::ScenarioError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  simnet::Metrics m;
  try {
    m = simnet::run(s, cfg.seed);
  } catch (const Error& e) {
    err << "error: " << cfg.scenario << ": " << e.what() << "\n";
    return kExitRunError;
  }
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) {
    err << "error: cannot create " << cfg.out_dir << ": " << ec.message() << "\n";
    return kExitFailure;
  }
  const std::filesystem::path dir(cfg.out_dir);
  const std::string summary = simnet::summary_text(m);
  if (!write_file(dir / "metrics.csv", simnet::metrics_csv(m), err) ||
      !write_file(dir / "payload_sizes.csv", simnet::payload_sizes_csv(m), err) ||
      !write_file(dir / "bandwidth.csv", simnet::bandwidth_csv(simnet::bandwidth_report(m, s)), err) ||
      !write_file(dir / "summary.txt", summary, err)) {
    return kExitFailure;
  }
  out << summary;
  return kExitOk;
}

int cmd_dp_table(const DpTableConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.samples < 100000) {
    err << "error: --samples must be at least 100000\n";
    return kExitBadInput;
  }
  std::vector<privacy::DpParams> cells;
  try {
    for (double e : cfg.epsilons) {
      for (double d : cfg.deltas) cells.push_back(privacy::dp_params(e, d, cfg.sensitivity));
    }
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  out << "epsilon,delta,sensitivity,lambda,t,analytic_p99,empirical_p99,rel_diff\n";
  std::vector<std::uint64_t> draws(cfg.samples);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const privacy::DpParams& p = cells[i];
    Rng rng = Rng(cfg.seed).derive("dp-table", i);
    for (std::uint64_t& x : draws) x = privacy::sample_junk_count(p, rng);
    const std::size_t rank = (99 * cfg.samples + 99) / 100 - 1;
    std::nth_element(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(rank), draws.end());
    const std::uint64_t empirical = draws[rank];
    const std::uint64_t analytic = privacy::junk_count_quantile(p, 0.99);
    const double rel = (static_cast<double>(empirical) - static_cast<double>(analytic)) / static_cast<double>(analytic);
    out << p.epsilon << ',' << p.delta << ',' << p.sensitivity << ',' << p.lambda << ',' << p.t << ',' << analytic
        << ',' << empirical << ',' << std::fixed << std::setprecision(5) << rel << std::defaultfloat
        << std::setprecision(6) << '\n';
  }
  return kExitOk;
}

int cmd_pir_bench(const PirBenchConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.tiles < 4 || (cfg.tiles & (cfg.tiles - 1)) != 0 || cfg.tiles > (1u << 24)) {
    err << "error: --tiles must be a power of two in [4, 2^24]\n";
    return kExitBadInput;
  }
  if (cfg.workers == 0 || cfg.block_cap == 0) {
    err << "error: --workers and --block-cap must be positive\n";
    return kExitBadInput;
  }
  const TilingParams tiling = bench_tiling(cfg.tiles);
  Rng rng = Rng(cfg.seed).derive("pir-bench");
  Rng key_rng = rng.derive("key");
  const SigningKey key = bench_key(key_rng);
  Rng content = rng.derive("content");

  // About a third of the tiles hold up to 40 real ids each.
  pir::TileEntries entries;
  for (std::uint32_t l = 0; l < cfg.tiles; ++l) {
    if (!content.bernoulli(0.35)) continue;
    const std::size_t n = 1 + content.below(40);
    for (std::size_t i = 0; i < n; ++i) {
      EphemeralId id;
      content.fill(id.bytes);
      entries[l].push_back({id, 0});
    }
  }
  pir::PirDb db;
  try {
    Rng build = rng.derive("build");
    db = pir::build_pir_db(0, entries, cfg.block_cap, privacy::dp_params(cfg.epsilon, cfg.delta, cfg.sensitivity),
                           key, build, tiling, 1);
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitRunError;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  const pir::PirDb flat = pir::replicate_blocks(db);
  const pir::PirDb& served = cfg.dedup ? db : flat;

  out << "tiles: " << cfg.tiles << " (tiling " << tiling.h_bits << "/" << tiling.m_bits << "/" << tiling.l_bits
      << ")\n";
  out << "unique blocks: " << db.blocks.size() << ", replicated blocks: " << flat.blocks.size()
      << ", response size: " << db.max_block_size() << " bytes\n";
  out << "serving: " << (cfg.dedup ? "deduplicated" : "replicated") << "\n";

  // Exhaustive correctness over every target, both layouts.
  Rng qrng = rng.derive("correctness");
  std::size_t ok = 0;
  std::size_t dedup_xors = 0;
  std::size_t flat_xors = 0;
  for (std::uint32_t target = 0; target < cfg.tiles; ++target) {
    auto [q1, q2] = pir::gen_query(target, cfg.tiles, qrng);
    pir::EvalStats s1, s2, f1, f2;
    const Bytes got = pir::combine(pir::eval_query(db, pir::fold_query(q1, db), &s1),
                                   pir::eval_query(db, pir::fold_query(q2, db), &s2));
    const Bytes got_flat = pir::combine(pir::eval_query(flat, pir::fold_query(q1, flat), &f1),
                                        pir::eval_query(flat, pir::fold_query(q2, flat), &f2));
    dedup_xors += s1.blocks_touched + s2.blocks_touched;
    flat_xors += f1.blocks_touched + f2.blocks_touched;
    ok += got == padded(db.lookup(target), db.max_block_size()) && got_flat == got;
  }
  out << "correctness: " << ok << "/" << cfg.tiles << " targets retrieved, dedup and replicated paths "
      << (ok == cfg.tiles ? "identical" : "DIFFER") << "\n";
  out << "block reads per query pair: dedup " << dedup_xors / cfg.tiles << ", replicated " << flat_xors / cfg.tiles
      << "\n";
  if (ok != cfg.tiles) return kExitFailure;
  if (cfg.trials == 0) return kExitOk;

  // Throughput: each worker answers its share of random queries.
  std::vector<pir::EvalStats> stats(cfg.workers);
  std::vector<std::size_t> failures(cfg.workers, 0);
  auto work = [&](std::size_t w) {
    Rng wr = rng.derive("worker", w);
    for (std::size_t t = w; t < cfg.trials; t += cfg.workers) {
      const auto target = static_cast<std::uint32_t>(wr.below(cfg.tiles));
      auto [q1, q2] = pir::gen_query(target, cfg.tiles, wr);
      pir::EvalStats a, b;
      const Bytes got = pir::combine(pir::eval_query(served, pir::fold_query(q1, served), &a),
                                     pir::eval_query(served, pir::fold_query(q2, served), &b));
      failures[w] += got != padded(db.lookup(target), db.max_block_size());
      stats[w].blocks_touched += a.blocks_touched + b.blocks_touched;
      stats[w].bytes_xored += a.bytes_xored + b.bytes_xored;
    }
  };
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < cfg.workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (std::thread& t : pool) t.join();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::size_t blocks = 0, bytes = 0, failed = 0;
  for (std::size_t w = 0; w < cfg.workers; ++w) {
    blocks += stats[w].blocks_touched;
    bytes += stats[w].bytes_xored;
    failed += failures[w];
  }
  out << "trials: " << cfg.trials << ", workers: " << cfg.workers << ", retrieval failures: " << failed << "\n";
  out << "blocks XORed: " << blocks << ", bytes XORed: " << bytes << "\n";
  const double s = std::max(secs, 1e-9);
  out << std::fixed << std::setprecision(1) << "throughput: " << static_cast<double>(blocks) / s << " blocks/s, "
      << static_cast<double>(bytes) / s / 1e6 << " MB/s, " << 1e3 * secs / static_cast<double>(cfg.trials)
      << " ms per query pair\n"
      << std::defaultfloat;
  return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_make_scenario(const MakeScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
  simnet::Scenario s;
  if (cfg.kind == "pilot") {
    s = simnet::make_pilot_scenario(cfg.seed);
  } else if (cfg.kind == "random") {
    s = simnet::random_scenario(cfg.seed);
  } else {
    err << "error: unknown scenario kind '" << cfg.kind << "' (pilot or random)\n";
    return kExitBadInput;
  }
  const std::string text = simnet::scenario_to_json(s);
  if (cfg.out.empty() || cfg.out == "-") {
    out << text;
    return kExitOk;
  }
  return write_file(cfg.out, text, err) ? kExitOk : kExitFailure;
}

}  // namespace silmarillion::cli
