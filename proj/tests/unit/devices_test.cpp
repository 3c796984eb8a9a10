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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "silmarillion/backend/backend.hpp"
#include "silmarillion/core/ephemeral_id.hpp"
#include "silmarillion/core/errors.hpp"
#include "silmarillion/devices/beacon.hpp"
#include "silmarillion/devices/dongle.hpp"
#include "silmarillion/devices/network_beacon.hpp"
#include "silmarillion/devices/pir_session.hpp"
#include "silmarillion/pir/pir_wire.hpp"
#include "silmarillion/privacy/dp_noise.hpp"
#include "test_util.hpp"

namespace silmarillion::devices {
namespace {

using backend::Backend;
using backend::BackendConfig;
using backend::IngestStatus;
using backend::Registry;
using backend::UploadMode;
using testing::random_eph;

BeaconBroadcast fake_broadcast(Rng& rng, std::uint32_t clock, LocationId loc = pack_location(1, 1, 1)) {
  return BeaconBroadcast{random_eph(rng), DeviceId{77}, loc, Descriptor{}, clock};
}

TEST(Beacon, NinetySixIdsPerDay) {
  Registry reg;
  Rng rng(1);
  Beacon b(reg.register_beacon(pack_location(2, 3, 4), Descriptor{1}, 0, rng), 0);
  std::set<EphemeralId> ids;
  for (Minutes t = 0; t < kMinutesPerDay; ++t) ids.insert(b.tick(t)->eph);
  EXPECT_EQ(ids.size(), 96u);
}

TEST(Beacon, PilotShapedUniqueIds) {
  Registry reg;
  Rng rng(2);
  std::set<EphemeralId> ids;
  for (std::uint32_t i = 0; i < 8; ++i) {
    Beacon b(reg.register_beacon(pack_location(2, 3, 100 + i), Descriptor{i}, 0, rng), 0);
    for (Minutes t = 0; t < 16 * kMinutesPerDay; ++t) ids.insert(b.tick(t)->eph);
  }
  EXPECT_EQ(ids.size(), 12288u);
}

TEST(Beacon, MatchesBackendDerivation) {
  Registry reg;
  Rng rng(3);
  const auto& r = reg.register_beacon(pack_location(5, 6, 7), Descriptor{2}, 500, rng);
  Beacon b(r, 500);
  for (Minutes t = 500; t < 1500; t += 7) {
    auto adv = b.tick(t);
    ASSERT_TRUE(adv.has_value());
    EXPECT_EQ(adv->clock, static_cast<std::uint32_t>(t));
    EXPECT_EQ(adv->eph, derive_ephemeral_id(r.key, r.loc, epoch_at(r.initial_clock, adv->clock, 15)));
    EXPECT_EQ(b.current_eph(), adv->eph);
  }
}

TEST(Beacon, CrashResumesFromPersistedTimer) {
  Registry reg;
  Rng rng(4);
  Beacon b(reg.register_beacon(pack_location(5, 6, 7), Descriptor{2}, 0, rng), 0);
  b.tick(97);
  b.crash(97);
  EXPECT_FALSE(b.tick(110).has_value());
  b.reboot(130);
  auto adv = b.tick(130);
  ASSERT_TRUE(adv.has_value());
  EXPECT_EQ(adv->clock, 91u);  // epoch start 90, plus one
  EXPECT_EQ(b.tick(140)->clock, 101u);
}

TEST(Dongle, ReceiptsCollapseIntoOneEntry) {
  Registry reg;
  Rng rng(5);
  Dongle d(reg.register_dongle(0, rng), 0);
  BeaconBroadcast adv = fake_broadcast(rng, 1000);
  d.on_advertisement(adv, -60, 1);
  d.on_advertisement(adv, -60, 1);  // same minute
  adv.clock = 1003;
  d.on_advertisement(adv, -70, 4);
  EXPECT_EQ(d.active_count(), 1u);
  d.tick(15);
  ASSERT_EQ(d.log().size(), 1u);
  const EncounterRecord& r = d.log()[0].record;
  EXPECT_EQ(r.t_start_d, 1u);
  EXPECT_EQ(r.t_int_d, 3);
  EXPECT_EQ(r.t_start_b, 1000u);
  EXPECT_EQ(r.t_int_b, 3);
  EXPECT_EQ(r.rssi, -63);  // three samples: -60, -60, -70
  EXPECT_EQ(d.log()[0].probe, cuckoo::fingerprint_and_indices(r.eph, {}));
}

TEST(Dongle, RssiMeanOfTwo) {
  Registry reg;
  Rng rng(6);
  Dongle d(reg.register_dongle(0, rng), 0);
  BeaconBroadcast adv = fake_broadcast(rng, 10);
  d.on_advertisement(adv, -60, 2);
  d.on_advertisement(adv, -70, 3);
  d.tick(15);
  ASSERT_EQ(d.log().size(), 1u);
  EXPECT_EQ(d.log()[0].record.rssi, -65);
}

TEST(Dongle, SealedInFollowingEpoch) {
  Registry reg;
  Rng rng(7);
  Dongle d(reg.register_dongle(0, rng), 0);
  d.on_advertisement(fake_broadcast(rng, 1), -50, 16);  // epoch 1
  d.tick(29);
  EXPECT_TRUE(d.log().empty());
  d.tick(30);  // epoch 2
  EXPECT_EQ(d.log().size(), 1u);
  EXPECT_EQ(d.active_count(), 0u);
}

TEST(Dongle, RetentionBoundary) {
  Registry reg;
  Rng rng(8);
  Dongle d(reg.register_dongle(0, rng), 0);
  d.on_advertisement(fake_broadcast(rng, 1), -50, 100);
  d.tick(120);
  ASSERT_EQ(d.log().size(), 1u);
  d.tick(100 + kRetentionMinutes);
  EXPECT_EQ(d.log().size(), 1u);
  d.tick(100 + kRetentionMinutes + 1);
  EXPECT_TRUE(d.log().empty());
}

TEST(Dongle, CircularCapacity) {
  Registry reg;
  Rng rng(9);
  Dongle d(reg.register_dongle(0, rng), 0);
  std::vector<EphemeralId> seen;
  for (Minutes t = 0; t < 2017; ++t) {
    BeaconBroadcast adv = fake_broadcast(rng, static_cast<std::uint32_t>(t));
    seen.push_back(adv.eph);
    d.on_advertisement(adv, -50, t);
  }
  d.tick(2017 + 15);
  ASSERT_EQ(d.log().size(), 2016u);
  EXPECT_EQ(d.log().front().record.eph, seen[1]);
  EXPECT_EQ(d.log().back().record.eph, seen.back());
  std::set<EphemeralId> unique;
  for (const auto& r : d.log()) unique.insert(r.record.eph);
  EXPECT_EQ(unique.size(), d.log().size());
}

TEST(Dongle, MalformedAdvertisementDropped) {
  Registry reg;
  Rng rng(10);
  Dongle d(reg.register_dongle(0, rng), 0);
  d.on_advertisement_bytes(Bytes(30, 0), -50, 1);
  d.on_advertisement_bytes(serialize_broadcast(fake_broadcast(rng, 1)), -50, 1);
  EXPECT_EQ(d.dropped_packets(), 1u);
  EXPECT_EQ(d.active_count(), 1u);
}

TEST(Dongle, ReappearingIdExtendsRecord) {
  Registry reg;
  Rng rng(11);
  Dongle d(reg.register_dongle(0, rng), 0);
  BeaconBroadcast adv = fake_broadcast(rng, 500);
  d.on_advertisement(adv, -50, 10);
  d.tick(20);  // sealed
  adv.clock = 520;
  d.on_advertisement(adv, -50, 30);
  d.tick(45);
  ASSERT_EQ(d.log().size(), 1u);
  EXPECT_EQ(d.log()[0].record.t_int_b, 20);
  EXPECT_EQ(d.log()[0].record.t_int_d, 20);
  // Stamps earlier than the stored start are ignored.
  adv.clock = 400;
  d.on_advertisement(adv, -50, 50);
  d.tick(60);
  EXPECT_EQ(d.log()[0].record.t_start_b, 500u);
  EXPECT_EQ(d.log()[0].record.t_int_b, 20);
}

// Feeds every minute in [from, to) from beacon to dongle.
void colocate(Beacon& b, Dongle& d, Minutes from, Minutes to, std::int8_t rssi = -60) {
  for (Minutes t = from; t < to; ++t) {
    if (auto adv = b.tick(t)) d.on_advertisement(*adv, rssi, t);
  }
}

class HonestWorld : public ::testing::Test {
 protected:
  void SetUp() override {
    BackendConfig cfg;
    cfg.pipeline.dp = privacy::dp_params(0.5, 0.05, 4);
    backend = std::make_unique<Backend>(cfg, 31);
    for (std::uint32_t i = 0; i < 3; ++i) {
      beacons.emplace_back(backend->registry().register_beacon(pack_location(4, 2, 20 + i), Descriptor{i}, 0, rng), 0);
    }
    for (int i = 0; i < 2; ++i) dongles.emplace_back(backend->registry().register_dongle(0, rng), 0);
  }

  backend::IngestResult upload(Dongle& d, Minutes now) {
    auto prepared = d.prepare_upload(UploadMode::kDelayed, *d.next_unused_otp(),
                                     backend->authority().issue(d.id(), 1), std::nullopt, rng);
    return backend->ingest_upload(prepared.envelope, now);
  }

  std::unique_ptr<Backend> backend;
  Rng rng{32};
  std::vector<Beacon> beacons;
  std::vector<Dongle> dongles;
};

TEST_F(HonestWorld, EverySealedRecordVerifies) {
  colocate(beacons[0], dongles[0], 7, 200);
  colocate(beacons[1], dongles[0], 260, 500);
  colocate(beacons[2], dongles[0], 555, 561);
  dongles[0].tick(600);
  ASSERT_GT(dongles[0].log().size(), 20u);
  auto r = upload(dongles[0], 600);
  ASSERT_EQ(r.status, IngestStatus::kAccepted) << r.reason;
  EXPECT_EQ(r.accepted, dongles[0].log().size());
  EXPECT_EQ(r.inconsistent, 0u);
  EXPECT_TRUE(backend->pending_reports().empty());
}

TEST_F(HonestWorld, BeaconCrashMidEncounterRepaired) {
  colocate(beacons[0], dongles[0], 90, 96);
  beacons[0].crash(96);
  for (Minutes t = 96; t < 130; ++t) dongles[0].tick(t);
  beacons[0].reboot(130);
  colocate(beacons[0], dongles[0], 130, 200);
  dongles[0].tick(230);

  const auto& recs = dongles[0].log();
  auto straddle = std::find_if(recs.begin(), recs.end(), [](const LogRecord& r) { return r.record.t_start_b == 90; });
  ASSERT_NE(straddle, recs.end());
  EXPECT_GT(straddle->record.t_int_d, straddle->record.t_int_b + 16);

  auto r = upload(dongles[0], 230);
  EXPECT_EQ(r.accepted + r.recovered, recs.size());
  EXPECT_EQ(backend->unresolved_start_mismatches(), 0u);
  EXPECT_TRUE(backend->pending_reports().empty());
  ASSERT_EQ(backend->repair_events().size(), 1u);
  const auto& ev = backend->repair_events()[0];
  EXPECT_EQ(ev.device, beacons[0].id());
  EXPECT_EQ(ev.offset.delta, 130 - 91);
  EXPECT_EQ(backend->riskdb().size(), recs.size());
}

TEST_F(HonestWorld, DongleCrashRepairedViaTwoBeacons) {
  colocate(beacons[0], dongles[0], 0, 100);
  dongles[0].crash(100);
  for (Minutes t = 100; t < 130; ++t) beacons[1].tick(t);
  dongles[0].reboot(130);
  colocate(beacons[1], dongles[0], 130, 170);
  colocate(beacons[2], dongles[0], 180, 210);
  dongles[0].tick(240);
  auto r = upload(dongles[0], 240);
  EXPECT_GT(r.inconsistent, 0u);
  EXPECT_EQ(r.accepted + r.recovered, dongles[0].log().size());
  EXPECT_TRUE(backend->pending_reports().empty());
  ASSERT_EQ(backend->repair_events().size(), 1u);
  EXPECT_EQ(backend->repair_events()[0].device, dongles[0].id());
  EXPECT_EQ(backend->repair_events()[0].offset.delta, 130 - 91);
  for (const auto& e : backend->riskdb()) {
    if (e.beacon != beacons[0].id()) {
      EXPECT_GE(e.real_time, 130);
    }
  }
}

TEST_F(HonestWorld, BroadcastAndPirPathsAgree) {
  // Patient at beacon 0 and 1, user at beacons 0 and 2.
  for (Minutes t = 10; t < 120; ++t) {
    auto a0 = beacons[0].tick(t);
    auto a1 = beacons[1].tick(t);
    auto a2 = beacons[2].tick(t);
    if (t < 60) dongles[0].on_advertisement(*a0, -60, t);
    if (t >= 70 && t < 100) dongles[0].on_advertisement(*a1, -60, t);
    if (t >= 30 && t < 80) dongles[1].on_advertisement(*a0, -60, t);
    if (t >= 90) dongles[1].on_advertisement(*a2, -60, t);
  }
  dongles[0].tick(140);
  dongles[1].tick(140);
  ASSERT_EQ(upload(dongles[0], 140).status, IngestStatus::kAccepted);
  backend::DailyRisk day = backend->run_daily_pipeline(1, kMinutesPerDay);

  Dongle via_broadcast = dongles[1];
  for (LocationId tile : via_broadcast.visited_tiles()) {
    NetworkBeacon nb(tile);
    nb.cache(day.day, day.broadcast.at(tile).wire);
    via_broadcast.begin_download(day.day, backend->public_key());
    DownloadStatus s = DownloadStatus::kInProgress;
    while (s == DownloadStatus::kInProgress) s = via_broadcast.on_broadcast_packet(nb.next_packet());
    ASSERT_EQ(s, DownloadStatus::kVerified);
  }

  Dongle via_pir = dongles[1];
  PirSession session = make_pir_request(via_pir, day.day, rng);
  ASSERT_EQ(session.queries.size(), via_pir.visited_tiles().size());
  NetworkBeacon relay(pack_location(4, 2, 20));
  for (const auto& q : session.queries) {
    Bytes r0 = relay.relay(q.requests[0], backend->pir_server(0), backend->registry(), rng);
    Bytes r1 = relay.relay(q.requests[1], backend->pir_server(1), backend->registry(), rng);
    auto block = recover_block(session, r0, r1);
    ASSERT_TRUE(block.has_value());
    ASSERT_TRUE(apply_block(via_pir, *block, backend->public_key()));
  }

  ASSERT_EQ(via_pir.log().size(), via_broadcast.log().size());
  std::size_t matched = 0;
  for (std::size_t i = 0; i < via_pir.log().size(); ++i) {
    EXPECT_EQ(via_pir.log()[i].matched, via_broadcast.log()[i].matched);
    matched += via_pir.log()[i].matched;
  }
  EXPECT_GT(matched, 0u);
  EXPECT_TRUE(via_broadcast.risk_score().notify);
}

TEST_F(HonestWorld, RelaySeesOnlyCiphertext) {
  colocate(beacons[0], dongles[1], 10, 60);
  dongles[1].tick(80);
  backend::DailyRisk day = backend->run_daily_pipeline(1, kMinutesPerDay);
  std::vector<Bytes> seen;
  NetworkBeacon relay(pack_location(4, 2, 20));
  relay.set_tap([&](ByteSpan b) { seen.emplace_back(b.begin(), b.end()); });
  Rng qrng(5);
  Rng copy = qrng;
  PirSession session = make_pir_request(dongles[1], day.day, qrng);
  ASSERT_EQ(session.queries.size(), 1u);
  const auto& q = session.queries[0];
  relay.relay(q.requests[0], backend->pir_server(0), backend->registry(), rng);
  relay.relay(q.requests[1], backend->pir_server(1), backend->registry(), rng);
  ASSERT_EQ(seen.size(), 4u);

  // Regenerate the plaintext shares from the same randomness.
  auto [a, b] = pir::gen_query(q.l_index, dongles[1].config().tiling.domain_size(), copy);
  for (const Bytes& plain : {pir::serialize_query({q.h_tile, day.day, a}), pir::serialize_query({q.h_tile, day.day, b})}) {
    for (const Bytes& s : seen) {
      EXPECT_EQ(std::search(s.begin(), s.end(), plain.begin() + 8, plain.begin() + 40), s.end());
    }
  }
  // Shares sealed for one server do not open under the other's key.
  EXPECT_FALSE(aead_open(session.keys[1], ByteSpan(q.requests[0]).first(6), ByteSpan(q.requests[0]).subspan(6)));
  EXPECT_TRUE(aead_open(session.keys[0], ByteSpan(q.requests[0]).first(6), ByteSpan(q.requests[0]).subspan(6)));
}

TEST(PirRequest, OneQueryPairPerTile) {
  Registry reg;
  Rng rng(12);
  Dongle d(reg.register_dongle(0, rng), 0);
  for (std::uint32_t i = 0; i < 3; ++i) {
    d.on_advertisement(fake_broadcast(rng, i, pack_location(3, 3, i)), -50, i);
    d.on_advertisement(fake_broadcast(rng, i, pack_location(3, 3, i)), -50, i);
  }
  d.tick(40);
  ASSERT_EQ(d.log().size(), 6u);
  PirSession s = make_pir_request(d, 1, rng);
  ASSERT_EQ(s.queries.size(), 3u);
  EXPECT_NE(s.keys[0], s.keys[1]);
  const std::size_t wire = pir::serialized_query_size(TilingParams{}.domain_size());
  for (const auto& q : s.queries) {
    for (const auto& r : q.requests) EXPECT_EQ(r.size(), 6 + kAeadOverhead + wire);
  }
}

// Builds a log-filled dongle from random ids.
Dongle full_dongle(std::size_t n, Rng& rng, DongleConfig cfg = {}) {
  static Registry reg;
  Dongle d(reg.register_dongle(0, rng), 0, cfg);
  for (std::size_t i = 0; i < n; ++i) d.on_advertisement(fake_broadcast(rng, 1), -50, static_cast<Minutes>(i));
  d.tick(static_cast<Minutes>(n) + 15);
  return d;
}

TEST(RiskChunk, LoggedIdMatches) {
  Rng rng(13);
  Dongle d = full_dongle(50, rng);
  std::vector<EphemeralId> items = privacy::generate_junk_ids(100, rng);
  items.push_back(d.log()[17].record.eph);
  auto chunks = cuckoo::chunk_risk_set(items, {}, 1, rng);
  for (const auto& c : chunks) d.on_risk_chunk(c);
  d.commit_matches();
  EXPECT_TRUE(d.log()[17].matched);
  EXPECT_EQ(d.risk_score().score, 1u);
  EXPECT_TRUE(d.risk_score().notify);
}

TEST(RiskChunk, JunkMatchesAtFalsePositiveRate) {
  Rng rng(14);
  DongleConfig cfg;
  cfg.cuckoo.fingerprint_bits = 10;
  Dongle base = full_dongle(2016, rng, cfg);
  double expected = 0;
  std::size_t observed = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto chunks = cuckoo::chunk_risk_set(privacy::generate_junk_ids(cfg.cuckoo.capacity(), rng), cfg.cuckoo, 1, rng);
    const auto& f = chunks[0].filter;
    Dongle d = base;
    d.on_risk_chunk(chunks[0]);
    d.commit_matches();
    observed += d.risk_score().score;
    // Per lookup: each occupied slot in the two buckets matches a random
    // fingerprint with probability about 1/(2^f - 1).
    expected += 2016.0 * 2 * cfg.cuckoo.bucket_size * f.load_factor() / ((1u << cfg.cuckoo.fingerprint_bits) - 1);
  }
  EXPECT_GT(observed, 0u);
  EXPECT_NEAR(observed / expected, 1.0, 0.12) << observed << " vs " << expected;
}

TEST(RiskScore, NoMatches) {
  Rng rng(15);
  Dongle d = full_dongle(10, rng);
  EXPECT_EQ(d.risk_score().score, 0u);
  EXPECT_FALSE(d.risk_score().notify);
}

TEST(RiskScore, OverlapFilterSuppressesEarlierVisit) {
  Rng rng(16);
  Registry reg;
  Dongle alice(reg.register_dongle(0, rng), 0);
  // Alice sees the beacon at 92..96; Bob, later diagnosed, at 100..104,
  // both within the beacon's epoch [90, 105).
  BeaconBroadcast adv = fake_broadcast(rng, 92);
  for (std::uint32_t t = 92; t <= 96; ++t) {
    adv.clock = t;
    alice.on_advertisement(adv, -50, t);
  }
  alice.tick(130);
  ASSERT_EQ(alice.log().size(), 1u);
  const std::uint64_t bob = cuckoo::pack_interval_annotation(100, 4);
  std::vector<EphemeralId> ids{adv.eph};
  std::vector<std::uint64_t> notes{bob};
  auto chunks = cuckoo::chunk_risk_set(ids, {}, 1, rng, std::span<const std::uint64_t>(notes));
  SigningKey key = SigningKey::from_seed({});
  cuckoo::RiskPayload p = cuckoo::sign_payload(1, chunks, key);
  ASSERT_TRUE(alice.apply_payload(p, key.public_key()));
  EXPECT_EQ(alice.risk_score(false).score, 1u);
  EXPECT_TRUE(alice.risk_score(false).notify);
  EXPECT_EQ(alice.risk_score(true).score, 0u);
  EXPECT_FALSE(alice.risk_score(true).notify);

  // Carol arrives after Bob and stays.
  Dongle carol(reg.register_dongle(0, rng), 0);
  for (std::uint32_t t = 102; t <= 104; ++t) {
    adv.clock = t;
    carol.on_advertisement(adv, -50, t);
  }
  carol.tick(130);
  ASSERT_TRUE(carol.apply_payload(p, key.public_key()));
  EXPECT_TRUE(carol.risk_score(true).notify);
}

TEST(Download, LossFreeSingleCycle) {
  Rng rng(17);
  Dongle d = full_dongle(30, rng);
  std::vector<EphemeralId> items = privacy::generate_junk_ids(1500, rng);
  items.push_back(d.log()[3].record.eph);
  SigningKey key = SigningKey::from_seed({1});
  Bytes wire = cuckoo::serialize_payload(cuckoo::sign_payload(9, cuckoo::chunk_risk_set(items, {}, 9, rng), key));
  NetworkBeacon nb(pack_location(1, 1, 1));
  nb.cache(9, wire);
  EXPECT_EQ(nb.packets_per_cycle(), (wire.size() + 249) / 250);

  d.begin_download(9, key.public_key());
  DownloadStatus s = DownloadStatus::kInProgress;
  std::size_t sent = 0;
  while (s == DownloadStatus::kInProgress) {
    s = d.on_broadcast_packet(nb.next_packet());
    ++sent;
  }
  EXPECT_EQ(s, DownloadStatus::kVerified);
  EXPECT_EQ(sent, nb.packets_per_cycle());
  EXPECT_EQ(d.download()->cycles(), 1u);
  EXPECT_TRUE(d.log()[3].matched);
  // Streaming: never more than one chunk held.
  const std::size_t chunk = cuckoo::serialized_chunk_size({}, false);
  EXPECT_EQ(d.download()->chunk_size(), chunk);
  EXPECT_LE(d.download()->peak_buffer_bytes(), chunk);
  EXPECT_GT(d.download()->chunks_done(), 1u);
}

TEST(Download, LostPacketRecoveredNextCycle) {
  Rng rng(18);
  Dongle d = full_dongle(30, rng);
  std::vector<EphemeralId> items = privacy::generate_junk_ids(2000, rng);
  items.push_back(d.log()[5].record.eph);
  SigningKey key = SigningKey::from_seed({2});
  Bytes wire = cuckoo::serialize_payload(cuckoo::sign_payload(4, cuckoo::chunk_risk_set(items, {}, 4, rng), key));
  NetworkBeacon nb(pack_location(1, 1, 1));
  nb.cache(4, wire);
  const std::size_t n = nb.packets_per_cycle();
  d.begin_download(4, key.public_key());
  DownloadStatus s = DownloadStatus::kInProgress;
  std::size_t sent = 0;
  while (s == DownloadStatus::kInProgress) {
    const BroadcastPacket& p = nb.next_packet();
    ++sent;
    if (sent == 7) continue;  // lost
    s = d.on_broadcast_packet(p);
  }
  EXPECT_EQ(s, DownloadStatus::kVerified);
  EXPECT_EQ(d.download()->cycles(), 2u);
  EXPECT_LE(sent, 2 * n);
  EXPECT_GE(sent, n + 7);
  EXPECT_TRUE(d.log()[5].matched);
}

TEST(Download, BadSignatureRejected) {
  Rng rng(19);
  Dongle d = full_dongle(30, rng);
  std::vector<EphemeralId> items{d.log()[0].record.eph};
  SigningKey key = SigningKey::from_seed({3});
  SigningKey other = SigningKey::from_seed({4});
  Bytes wire = cuckoo::serialize_payload(cuckoo::sign_payload(2, cuckoo::chunk_risk_set(items, {}, 2, rng), other));
  NetworkBeacon nb(pack_location(1, 1, 1));
  nb.cache(2, wire);
  d.begin_download(2, key.public_key());
  DownloadStatus s = DownloadStatus::kInProgress;
  for (std::size_t i = 0; i < 3 * nb.packets_per_cycle() && s == DownloadStatus::kInProgress; ++i) {
    s = d.on_broadcast_packet(nb.next_packet());
  }
  EXPECT_EQ(s, DownloadStatus::kRejected);
  EXPECT_FALSE(d.log()[0].matched);
}

TEST(NetworkBeacon, PacketCountsAndPeriod) {
  NetworkBeacon nb(LocationId{});
  nb.cache(1, Bytes(1000, 7));
  EXPECT_EQ(nb.packets_per_cycle(), 4u);
  EXPECT_EQ(nb.cycle_period(2), 8);
  auto c = nb.cycle();
  ASSERT_EQ(c.size(), 4u);
  for (const auto& p : c) EXPECT_EQ(p.data.size(), 250u);
  EXPECT_EQ(nb.next_packet().index, 0);
  nb.cache(1, Bytes(1001, 7));
  EXPECT_EQ(nb.packets_per_cycle(), 5u);
  EXPECT_EQ(nb.cycle().back().data.size(), 1u);
}

TEST(Upload, DelayedFullLogLength) {
  Rng rng(20);
  Dongle d = full_dongle(2016, rng);
  auto p = d.prepare_upload(UploadMode::kDelayed, 0, Bytes(36, 1), std::nullopt, rng);
  EXPECT_EQ(p.envelope.ciphertext.size(), 2016 * kEncounterSize + kAeadOverhead);
  EXPECT_FALSE(p.release.has_value());
}

TEST(Upload, ReusedOtpRejected) {
  Rng rng(21);
  Dongle d = full_dongle(3, rng);
  d.prepare_upload(UploadMode::kDelayed, 2, {}, std::nullopt, rng);
  EXPECT_THROW(d.prepare_upload(UploadMode::kDelayed, 2, {}, std::nullopt, rng), AuthenticationError);
  EXPECT_THROW(d.prepare_upload(UploadMode::kSelective, 3, {}, std::nullopt, rng), ParameterError);
}

TEST_F(HonestWorld, SelectiveAndEarlyModes) {
  colocate(beacons[0], dongles[0], 10, 100);
  dongles[0].tick(120);
  Dongle& d = dongles[0];

  std::vector<EphemeralId> none;
  auto empty = d.prepare_upload(UploadMode::kSelective, 0, backend->authority().issue(d.id(), 1),
                                std::span<const EphemeralId>(none), rng);
  auto r = backend->ingest_upload(empty.envelope, 120);
  EXPECT_EQ(r.status, IngestStatus::kAccepted);
  EXPECT_EQ(r.uploaded, 0u);

  std::vector<EphemeralId> pick{d.log()[1].record.eph, d.log()[2].record.eph};
  auto some = d.prepare_upload(UploadMode::kSelective, 1, backend->authority().issue(d.id(), 1),
                               std::span<const EphemeralId>(pick), rng);
  EXPECT_EQ(backend->ingest_upload(some.envelope, 120).accepted, 2u);

  auto early = d.prepare_upload(UploadMode::kEarly, 2, {}, std::nullopt, rng);
  ASSERT_TRUE(early.release.has_value());
  EXPECT_EQ(backend->ingest_upload(early.envelope, 130).status, IngestStatus::kEscrowed);
  EXPECT_EQ(backend->riskdb().size(), 2u);
  early.release->certificate = backend->authority().issue(d.id(), 2);
  auto released = backend->release_escrow(*early.release, 200);
  EXPECT_EQ(released.status, IngestStatus::kAccepted);
  EXPECT_EQ(released.accepted, d.log().size());
}

}  // namespace
}  // namespace silmarillion::devices
