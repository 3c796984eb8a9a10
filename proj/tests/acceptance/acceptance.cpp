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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "silmarillion/backend/registry.hpp"
#include "silmarillion/backend/verification.hpp"
#include "silmarillion/core/clock.hpp"
#include "silmarillion/core/ephemeral_id.hpp"
#include "silmarillion/core/rng.hpp"
#include "silmarillion/core/wire.hpp"
#include "silmarillion/cuckoo/cuckoo_filter.hpp"
#include "silmarillion/cuckoo/risk_chunk.hpp"
#include "silmarillion/devices/beacon.hpp"
#include "silmarillion/devices/dongle.hpp"
#include "silmarillion/pir/pir_db.hpp"
#include "silmarillion/pir/pir_query.hpp"
#include "silmarillion/privacy/dp_noise.hpp"
#include "silmarillion/simnet/bandwidth.hpp"
#include "silmarillion/simnet/oracle.hpp"
#include "silmarillion/simnet/scenario.hpp"
#include "silmarillion/simnet/simulator.hpp"

namespace {

using namespace silmarillion;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// 1. Empirical 99th percentile of the junk count against the published
// noise table.
Outcome dp_noise_table() {
  struct Cell {
    double epsilon, delta;
    std::uint64_t published;
  };
  const Cell cells[] = {
      {0.5, 0.001, 39098},  {0.5, 0.01, 29925},   {0.2, 0.001, 86969},  {0.2, 0.01, 64559},
      {0.1, 0.001, 159131}, {0.1, 0.01, 115991},  {0.05, 0.001, 290088}, {0.05, 0.01, 210058},
  };
  constexpr std::size_t kSamples = 1000000;
  std::vector<std::uint64_t> draws(kSamples);
  double worst = 0;
  bool ok = true;
  for (std::size_t i = 0; i < std::size(cells); ++i) {
    const privacy::DpParams p = privacy::dp_params(cells[i].epsilon, cells[i].delta);
    Rng rng = Rng(2026).derive("noise-table", i);
    for (auto& x : draws) x = privacy::sample_junk_count(p, rng);
    const std::size_t rank = kSamples * 99 / 100 - 1;
    std::nth_element(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(rank), draws.end());
    const double rel = std::abs(static_cast<double>(draws[rank]) - static_cast<double>(cells[i].published)) /
                       static_cast<double>(cells[i].published);
    worst = std::max(worst, rel);
    ok = ok && rel <= 0.02;
  }
  return {ok, fmt("8 cells x 10^6 samples, worst deviation %.3f%% (limit 2%%)", 100 * worst)};
}

// 2. Adjacent inputs f and f + A: every singleton and threshold outcome set
// satisfies Pr[O] <= delta + e^eps Pr'[O] empirically.
Outcome dp_theorem() {
  const privacy::DpParams p = privacy::dp_params(0.5, 0.05, 4);
  constexpr std::size_t kSamples = 1000000;
  const std::uint64_t f = 10;
  std::map<std::uint64_t, double> h0, h1;
  Rng r0 = Rng(7).derive("dp-adjacent", 0);
  Rng r1 = Rng(7).derive("dp-adjacent", 1);
  for (std::size_t i = 0; i < kSamples; ++i) {
    h0[f + privacy::sample_junk_count(p, r0)] += 1.0 / kSamples;
    h1[f + p.sensitivity + privacy::sample_junk_count(p, r1)] += 1.0 / kSamples;
  }
  std::vector<std::uint64_t> outcomes;
  for (const auto& [o, _] : h0) outcomes.push_back(o);
  for (const auto& [o, _] : h1) outcomes.push_back(o);
  std::sort(outcomes.begin(), outcomes.end());
  outcomes.erase(std::unique(outcomes.begin(), outcomes.end()), outcomes.end());

  const double bound = std::exp(p.epsilon);
  double worst = -1;  // max of Pr[O] - delta - e^eps Pr'[O]
  double pre0 = 0, pre1 = 0;
  auto check = [&](double a, double b) {
    worst = std::max({worst, a - p.delta - bound * b, b - p.delta - bound * a});
  };
  for (std::uint64_t o : outcomes) {
    const double a = h0.count(o) ? h0[o] : 0.0;
    const double b = h1.count(o) ? h1[o] : 0.0;
    check(a, b);
    pre0 += a;
    pre1 += b;
    check(pre0, pre1);
    check(1 - pre0, 1 - pre1);
  }
  return {worst <= 0, fmt("A=4 eps=0.5 delta=0.05, %zu buckets, max slack %.4f (must be <= 0)", outcomes.size(),
                          worst)};
}

pir::TileEntries random_entries(Rng& rng, std::uint32_t domain) {
  pir::TileEntries e;
  for (std::uint32_t l = 0; l < domain; ++l) {
    if (rng.bernoulli(0.6)) continue;
    const std::size_t n = rng.below(31);
    for (std::size_t i = 0; i < n; ++i) {
      EphemeralId id;
      rng.fill(id.bytes);
      e[l].push_back({id, 0});
    }
  }
  return e;
}

SigningKey acceptance_key() {
  std::array<std::uint8_t, 32> seed{};
  seed[7] = 99;
  return SigningKey::from_seed(seed);
}

// 3. Exhaustive two-server retrieval on 200 random databases.
Outcome pir_correctness() {
  const TilingParams tiling{26, 2, 4};
  const std::uint32_t domain = tiling.domain_size();
  pir::PayloadOptions small;
  small.cuckoo.num_indices = 8;
  const SigningKey key = acceptance_key();
  Rng rng(303);
  std::size_t checked = 0, wrong = 0, flat_mismatch = 0, layouts_deduped = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t cap = 500 + rng.below(500);
    const pir::PirDb db = pir::build_pir_db(0, random_entries(rng, domain), cap, privacy::dp_params(1.0, 0.1, 2),
                                            key, rng, tiling, static_cast<std::uint32_t>(trial), small);
    const pir::PirDb flat = pir::replicate_blocks(db);
    layouts_deduped += db.blocks.size() < flat.blocks.size();
    for (std::uint32_t target = 0; target < domain; ++target) {
      auto [q1, q2] = pir::gen_query(target, domain, rng);
      const Bytes got = pir::combine(pir::eval_query(db, pir::fold_query(q1, db)),
                                     pir::eval_query(db, pir::fold_query(q2, db)));
      const Bytes got_flat = pir::combine(pir::eval_query(flat, pir::fold_query(q1, flat)),
                                          pir::eval_query(flat, pir::fold_query(q2, flat)));
      Bytes expect = db.lookup(target);
      expect.resize(db.max_block_size(), 0);
      wrong += got != expect;
      flat_mismatch += got_flat != got;
      ++checked;
    }
  }
  return {wrong == 0 && flat_mismatch == 0 && layouts_deduped > 0,
          fmt("200 DBs x 64 targets = %zu retrievals, %zu wrong, %zu dedup/replicated mismatches (%zu DBs deduped)",
              checked, wrong, flat_mismatch, layouts_deduped)};
}

// 4. Each server's share, for a fixed target, has uniform per-bit marginals.
Outcome pir_share_privacy() {
  constexpr std::size_t kDomain = 64;
  constexpr std::size_t kQueries = 10000;
  constexpr double kCritical = 93.2169;  // chi-square, 64 dof, alpha 0.01
  Rng rng(404);
  std::array<std::array<std::size_t, kDomain>, 2> ones{};
  for (std::size_t q = 0; q < kQueries; ++q) {
    auto [s1, s2] = pir::gen_query(17, kDomain, rng);
    for (std::size_t i = 0; i < kDomain; ++i) {
      ones[0][i] += s1.get(i);
      ones[1][i] += s2.get(i);
    }
  }
  double stat[2] = {0, 0};
  for (int s = 0; s < 2; ++s) {
    for (std::size_t c : ones[s]) {
      const double d = static_cast<double>(c) - kQueries / 2.0;
      stat[s] += 4 * d * d / kQueries;
    }
  }
  return {stat[0] < kCritical && stat[1] < kCritical,
          fmt("10^4 queries, target 17: chi2 server0 %.1f, server1 %.1f (critical %.1f)", stat[0], stat[1],
              kCritical)};
}

// 5. Cuckoo filter: no false negatives, per-lookup false positives, size.
Outcome cuckoo_filter() {
  const cuckoo::CuckooParams params;
  Rng rng(505);
  const std::vector<EphemeralId> items = privacy::generate_junk_ids(1000000, rng);
  const std::vector<cuckoo::RiskChunk> chunks = cuckoo::chunk_risk_set(items, params, 1, rng);

  // Items fill chunks in order, so each sits in the current chunk or the next.
  std::size_t missing = 0, c = 0;
  for (const EphemeralId& id : items) {
    const cuckoo::Probe probe = cuckoo::fingerprint_and_indices(id, params);
    if (chunks[c].filter.contains(probe)) continue;
    if (c + 1 < chunks.size() && chunks[c + 1].filter.contains(probe)) {
      ++c;
      continue;
    }
    ++missing;
  }

  // 10^7 fresh ids, each looked up in 100 full filters.
  constexpr std::size_t kProbes = 10000000;
  constexpr std::size_t kFilters = 100;
  std::size_t hits = 0;
  Rng probe_rng(506);
  for (std::size_t i = 0; i < kProbes; ++i) {
    EphemeralId id;
    probe_rng.fill(id.bytes);
    const cuckoo::Probe probe = cuckoo::fingerprint_and_indices(id, params);
    for (std::size_t k = 0; k < kFilters; ++k) hits += chunks[k].filter.contains(probe);
  }
  const double lookups = static_cast<double>(kProbes * kFilters);
  const double rate = static_cast<double>(hits) / lookups;
  const double limit = 1.2 * 8.0 / std::ldexp(1.0, 27);

  double load = 0;
  std::size_t bytes = 0;
  for (std::size_t k = 0; k < chunks.size(); ++k) {
    bytes += cuckoo::serialize_chunk(chunks[k]).size();
    if (k + 1 < chunks.size()) load += chunks[k].filter.load_factor();
  }
  load /= static_cast<double>(chunks.size() - 1);
  const double reduction = static_cast<double>(items.size() * kEphemeralIdSize) / static_cast<double>(bytes);
  return {missing == 0 && rate <= limit && load >= 0.85 && reduction >= 4.0,
          fmt("10^6 items: %zu false negatives; FP %.3g per lookup over %.0e lookups (limit %.3g); "
              "mean load %.3f, size reduction %.2fx",
              missing, rate, lookups, limit, load, reduction)};
}

// 6. Pilot-shaped run and oracle equivalence.
Outcome pilot_and_oracle() {
  const simnet::Scenario pilot = simnet::make_pilot_scenario(1);
  const simnet::Metrics m = simnet::run(pilot, 6);
  std::size_t mismatched = 0, nonempty = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const simnet::Scenario s = simnet::random_scenario(1000 + seed);
    const simnet::ExposureSet expected = simnet::brute_force_exposures(s);
    mismatched += simnet::run(s, seed).true_positives != expected;
    nonempty += !expected.empty();
  }
  return {m.unique_ephemeral_ids == 12288 && mismatched == 0,
          fmt("pilot (8 beacons, 15 users, 16 days): %zu unique ids; oracle mismatches %zu/100 (%zu non-empty)",
              m.unique_ephemeral_ids, mismatched, nonempty)};
}

// 7a. Tampered ids from real device logs are always rejected.
std::pair<std::size_t, std::size_t> tampered_rejections() {
  using backend::VerifyStatus;
  backend::Registry reg;
  Rng rng(707);
  const auto& b = reg.register_beacon(pack_location(100, 3, 40), Descriptor{5}, 0, rng);
  const auto& other = reg.register_beacon(pack_location(100, 3, 41), Descriptor{5}, 0, rng);
  const auto& d = reg.register_dongle(0, rng);
  devices::Beacon beacon(b, 0);
  devices::Dongle dongle(d, 0);
  for (Minutes t = 0; t < 3 * kMinutesPerDay; ++t) {
    if (auto adv = beacon.tick(t); adv && t % 3 == 0) dongle.on_advertisement(*adv, -60, t);
  }
  dongle.tick(3 * kMinutesPerDay);
  std::vector<EncounterRecord> honest;
  for (const auto& r : dongle.log()) honest.push_back(r.record);

  std::size_t honest_ok = 0;
  for (const EncounterRecord& r : honest) {
    honest_ok += backend::verify_encounter(r, d.id, reg, 1, kDefaultEpochMinutes).status == VerifyStatus::kAccepted;
  }
  std::size_t rejected = 0;
  Rng adv(708);
  for (std::size_t i = 0; i < 10000; ++i) {
    EncounterRecord r = honest[adv.below(honest.size())];
    const std::uint32_t epoch = epoch_at(b.initial_clock, r.t_start_b, kDefaultEpochMinutes);
    switch (i % 6) {
      case 0: {
        const auto bit = adv.below(kEphemeralIdSize * 8);
        r.eph.bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        break;
      }
      case 1:
        adv.fill(r.eph.bytes);
        break;
      case 2:
        r.eph = derive_ephemeral_id(other.key, other.loc, epoch);
        break;
      case 3:
        r.eph = derive_ephemeral_id(b.key, b.loc, epoch + 2 + static_cast<std::uint32_t>(adv.below(500)));
        break;
      case 4:
        r.eph = derive_ephemeral_id(b.key, pack_location(100, 3, 42), epoch);
        break;
      case 5:  // id replayed from another record of the same beacon
        r.eph = honest[adv.below(honest.size())].eph;
        if (r.eph == derive_ephemeral_id(b.key, b.loc, epoch)) r.eph.bytes[0] ^= 0x80;
        break;
    }
    rejected += backend::verify_encounter(r, d.id, reg, 1, kDefaultEpochMinutes).status == VerifyStatus::kRejected;
  }
  return {honest_ok == honest.size() ? rejected : 0, honest.size()};
}

simnet::Scenario crash_base(std::uint32_t days) {
  simnet::Scenario s;
  s.name = "crash";
  s.days = days;
  s.tiling = TilingParams{26, 2, 4};
  s.epsilon = 0.5;
  s.delta = 0.05;
  s.sensitivity = 4;
  s.block_cap = 1 << 14;
  s.beacons = {{"a", {0, 0, 1}, 1, {}}, {"b", {0, 0, 2}, 2, {}}};
  return s;
}

// 7b. Scripted crash scenarios end with every uploaded encounter verified.
std::vector<std::string> crash_failures() {
  std::vector<std::pair<std::string, simnet::Scenario>> cases;
  {
    simnet::Scenario s = crash_base(3);  // beacon crash, two dongles witness it
    s.beacons[0].crashes.push_back({400, 440});
    s.users = {{"u0", {{0, 100, 130, -60}, {0, 600, 640, -60}}, {}}, {"u1", {{0, 700, 730, -60}}, {}}};
    s.infections = {{0, 1, backend::UploadMode::kDelayed, {}}, {1, 2, backend::UploadMode::kDelayed, {}}};
    cases.emplace_back("beacon crash", s);
  }
  {
    simnet::Scenario s = crash_base(2);  // dongle crash, two beacons witness it
    s.users = {{"u0", {{0, 100, 130, -60}, {0, 600, 640, -60}, {1, 700, 730, -60}}, {{400, 445}}}};
    s.infections = {{0, 1, backend::UploadMode::kDelayed, {}}};
    cases.emplace_back("dongle crash", s);
  }
  {
    simnet::Scenario s = crash_base(3);  // both crash; early upload path
    s.beacons.push_back({"c", {0, 0, 3}, 3, {}});
    s.beacons[1].crashes.push_back({200, 290});
    s.users = {{"u0", {{0, 100, 130, -60}, {0, 600, 630, -60}, {2, 700, 730, -60}, {1, 900, 930, -60}}, {{500, 520}}},
               {"u1", {{1, 150, 180, -60}, {1, 1000, 1030, -60}}, {}},
               {"u2", {{1, 1100, 1130, -60}}, {}}};
    s.infections = {{0, 1, backend::UploadMode::kEarly, {}},
                    {1, 2, backend::UploadMode::kDelayed, {}},
                    {2, 2, backend::UploadMode::kDelayed, {}}};
    cases.emplace_back("beacon and dongle crash", s);
  }
  std::vector<std::string> failed;
  for (const auto& [name, s] : cases) {
    const simnet::Metrics m = simnet::run(s, 17);
    const bool ok = m.unresolved_inconsistencies == 0 && m.total(&simnet::DayMetrics::repair_events) > 0 &&
                    m.total(&simnet::DayMetrics::encounters_accepted) ==
                        m.total(&simnet::DayMetrics::encounters_uploaded);
    if (!ok) {
      failed.push_back(name + fmt("(unresolved %zu, repairs %zu, accepted %zu/%zu)", m.unresolved_inconsistencies,
                                  m.total(&simnet::DayMetrics::repair_events),
                                  m.total(&simnet::DayMetrics::encounters_accepted),
                                  m.total(&simnet::DayMetrics::encounters_uploaded)));
    }
  }
  return failed;
}

Outcome verification_and_repair() {
  const auto [rejected, honest] = tampered_rejections();
  const std::vector<std::string> failed = crash_failures();
  std::string which;
  for (const std::string& f : failed) which += " " + f;
  return {rejected == 10000 && failed.empty(),
          fmt("%zu/10000 tampered fixtures rejected (from %zu honest records); crash scenarios unresolved:%s",
              rejected, honest, which.empty() ? " none" : which.c_str())};
}

// 8. Wire sizes and round trips.
Outcome wire_format() {
  Rng rng(808);
  std::size_t bad = 0;
  const BeaconBroadcast sample{};
  const EncounterRecord enc{};
  const std::size_t bsize = serialize_broadcast(sample).size();
  const std::size_t esize = serialize_encounter(enc).size();
  for (int i = 0; i < 100000; ++i) {
    EncounterRecord e;
    rng.fill(e.eph.bytes);
    e.beacon.value = static_cast<std::uint32_t>(rng.next_u64());
    e.loc.packed = static_cast<std::uint32_t>(rng.next_u64());
    e.desc.value = static_cast<std::uint32_t>(rng.next_u64());
    e.t_start_b = static_cast<std::uint32_t>(rng.next_u64());
    e.t_int_b = static_cast<std::uint8_t>(rng.next_u64());
    e.t_start_d = static_cast<std::uint32_t>(rng.next_u64());
    e.t_int_d = static_cast<std::uint8_t>(rng.next_u64());
    e.rssi = static_cast<std::int8_t>(rng.next_u64());
    const Bytes w = serialize_encounter(e);
    bad += w.size() != 38 || parse_encounter(w) != e;
    BeaconBroadcast b{e.eph, e.beacon, e.loc, e.desc, e.t_start_d};
    const Bytes bw = serialize_broadcast(b);
    bad += bw.size() != 31 || parse_broadcast(bw) != b;
  }
  return {bsize == 31 && esize == 38 && bad == 0,
          fmt("broadcast %zu bytes, encounter %zu bytes, %zu round-trip failures over 10^5 records", bsize, esize,
              bad)};
}

// 9. Broadcast bytes follow region-wide infections; query bytes follow the
// user's own tiles.
Outcome bandwidth_scaling() {
  auto build = [](std::size_t infected) {
    simnet::Scenario s = crash_base(3);
    s.beacons.clear();
    s.retrieval = simnet::Retrieval::kBoth;
    s.beacons = {{"n1", {0, 1, 1}, 1, {}}, {"n2", {0, 1, 2}, 2, {}}, {"n3", {0, 2, 3}, 3, {}}};
    simnet::UserSpec one{"one", {}, {}}, three{"three", {}, {}};
    for (Minutes d = 0; d < 3; ++d) {
      const Minutes t = d * kMinutesPerDay;
      one.visits.push_back({0, t + 60, t + 120, -60});
      three.visits.push_back({0, t + 60, t + 120, -60});
      three.visits.push_back({1, t + 200, t + 260, -60});
      three.visits.push_back({2, t + 300, t + 360, -60});
    }
    s.users = {one, three};
    for (std::size_t p = 0; p < 12; ++p) {
      s.beacons.push_back({"far" + std::to_string(p), {1, 0, 5}, 9, {}});
      s.users.push_back({"resident" + std::to_string(p), {{s.beacons.size() - 1, 0, 2 * kMinutesPerDay, -60}}, {}});
      if (p < infected) s.infections.push_back({s.users.size() - 1, 2, backend::UploadMode::kDelayed, {}});
    }
    return s;
  };
  std::vector<simnet::BandwidthReport> reports;
  for (std::size_t infected : {0u, 3u, 6u, 12u}) {
    const simnet::Scenario s = build(infected);
    reports.push_back(simnet::bandwidth_report(simnet::run(s, 909), s));
  }
  bool broadcast_monotone = true, query_constant = true, noise_floor = reports[0].broadcast_bytes > 0;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    broadcast_monotone = broadcast_monotone && reports[i].broadcast_bytes > reports[i - 1].broadcast_bytes;
    for (std::size_t u = 0; u < 2; ++u) {
      query_constant = query_constant &&
                       reports[i].users[u].query_download_bytes == reports[0].users[u].query_download_bytes &&
                       reports[i].users[u].query_upload_bytes == reports[0].users[u].query_upload_bytes;
    }
  }
  const auto& u = reports.back().users;
  const bool tiles_scale = u[0].visited_tiles == 1 && u[1].visited_tiles == 3 &&
                           u[1].query_blocks == 3 * u[0].query_blocks &&
                           u[1].query_download_bytes == 3 * u[0].query_download_bytes;
  return {broadcast_monotone && query_constant && noise_floor && tiles_scale,
          fmt("broadcast bytes for 0/3/6/12 far infections: %zu/%zu/%zu/%zu; query download bytes 1 vs 3 tiles: "
              "%zu vs %zu, unchanged by infections: %s",
              reports[0].broadcast_bytes, reports[1].broadcast_bytes, reports[2].broadcast_bytes,
              reports[3].broadcast_bytes, u[0].query_download_bytes, u[1].query_download_bytes,
              query_constant ? "yes" : "no")};
}

// 10. Equal seeds, equal bytes.
Outcome determinism() {
  std::vector<simnet::Scenario> scenarios = {simnet::make_pilot_scenario(1)};
  for (std::uint64_t seed : {3u, 8u, 21u}) {
    simnet::Scenario s = simnet::random_scenario(seed);
    s.channel.reception_probability = 0.8;
    s.channel.packet_loss = 0.05;
    s.retrieval = simnet::Retrieval::kBoth;
    scenarios.push_back(s);
  }
  std::size_t differing = 0;
  for (const simnet::Scenario& s : scenarios) {
    const simnet::Metrics a = simnet::run(s, 1010);
    const simnet::Metrics b = simnet::run(s, 1010);
    differing += simnet::metrics_csv(a) != simnet::metrics_csv(b) ||
                 simnet::payload_sizes_csv(a) != simnet::payload_sizes_csv(b) || a.payload_digest != b.payload_digest;
  }
  return {differing == 0, fmt("%zu scenarios run twice, %zu differ in metrics or signed payloads", scenarios.size(),
                              differing)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "DP noise table", 60, dp_noise_table},
      {2, "DP guarantee on adjacent inputs", 60, dp_theorem},
      {3, "PIR correctness", 60, pir_correctness},
      {4, "PIR share privacy", 0, pir_share_privacy},
      {5, "Cuckoo filter", 120, cuckoo_filter},
      {6, "Pilot and oracle equivalence", 120, pilot_and_oracle},
      {7, "Verification and repair", 0, verification_and_repair},
      {8, "Wire format", 0, wire_format},
      {9, "Bandwidth scaling", 0, bandwidth_scaling},
      {10, "Determinism", 0, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += fmt(" [over the %.0f s budget]", c.budget_s);
    }
    failures += !o.pass;
    std::printf("%s %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
