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

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "silmarillion/core/errors.hpp"
#include "silmarillion/pir/pir_db.hpp"
#include "silmarillion/pir/pir_query.hpp"
#include "silmarillion/pir/pir_wire.hpp"
#include "test_util.hpp"

namespace silmarillion::pir {
namespace {

const TilingParams kSmall{26, 2, 4};  // 4 M-tiles of 16 L-tiles, domain 64

SigningKey test_key() {
  std::array<std::uint8_t, 32> seed{};
  seed[0] = 42;
  return SigningKey::from_seed(seed);
}

PayloadOptions small_filters() {
  PayloadOptions o;
  o.cuckoo.num_indices = 8;  // 32 slots per chunk
  return o;
}

TileEntries random_entries(Rng& rng, std::uint32_t domain, std::size_t max_per_tile) {
  TileEntries e;
  for (std::uint32_t l = 0; l < domain; ++l) {
    if (rng.bernoulli(0.6)) continue;
    const std::size_t n = rng.below(max_per_tile + 1);
    for (std::size_t i = 0; i < n; ++i) e[l].push_back({testing::random_eph(rng), 0});
  }
  return e;
}

bool payload_contains(const Bytes& block, const EphemeralId& id) {
  cuckoo::RiskPayload p = cuckoo::parse_payload(block);
  return std::any_of(p.chunks.begin(), p.chunks.end(),
                     [&](const cuckoo::RiskChunk& c) { return c.filter.contains(id); });
}

TEST(BuildPirDb, EmptyEntriesGiveOneJunkBlockPerMTile) {
  Rng rng(1);
  PirDb db = build_pir_db(0, {}, 1 << 20, privacy::dp_params(1.0, 0.1, 4), test_key(), rng, kSmall);
  ASSERT_EQ(db.blocks.size(), kSmall.m_tiles_per_h_tile());
  for (std::uint32_t l = 0; l < db.domain_size(); ++l) EXPECT_EQ(db.layout[l], l / 16);
  for (std::size_t b = 0; b < db.blocks.size(); ++b) {
    EXPECT_EQ(db.real_counts[b], 0u);
    EXPECT_TRUE(cuckoo::verify_payload(cuckoo::parse_payload(db.blocks[b]), test_key().public_key()));
  }
}

TEST(BuildPirDb, OverflowingMTileSplitsIntoLTiles) {
  Rng rng(2);
  TileEntries e;
  for (std::uint32_t l = 16; l < 32; ++l) {
    for (int i = 0; i < 20; ++i) e[l].push_back({testing::random_eph(rng), 0});
  }
  e[40].push_back({testing::random_eph(rng), 0});
  PirDb db = build_pir_db(0, e, 400, privacy::dp_params(1.0, 0.1, 2), test_key(), rng, kSmall,
                          7, small_filters());
  // M-tiles 0, 2, 3 aggregated; M-tile 1 split into its 16 L-tiles.
  ASSERT_EQ(db.blocks.size(), 3u + 16u);
  std::set<std::uint32_t> m1(db.layout.begin() + 16, db.layout.begin() + 32);
  EXPECT_EQ(m1.size(), 16u);
  for (std::uint32_t l = 32; l < 48; ++l) EXPECT_EQ(db.layout[l], db.layout[32]);
  EXPECT_EQ(db.real_counts[db.layout[40]], 1u);
  std::set<std::uint32_t> used(db.layout.begin(), db.layout.end());
  EXPECT_EQ(used.size(), db.blocks.size());
}

TEST(BuildPirDb, BlocksOrderedByFirstIndex) {
  Rng rng(3);
  PirDb db = build_pir_db(0, random_entries(rng, 64, 40), 500, privacy::dp_params(1.0, 0.1, 2),
                          test_key(), rng, kSmall, 0, small_filters());
  std::uint32_t next = 0;
  for (std::uint32_t b : db.layout) {
    ASSERT_LE(b, next);
    if (b == next) ++next;
  }
  EXPECT_EQ(next, db.blocks.size());
}

TEST(BuildPirDb, CoverageOfEveryEntry) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    TileEntries e = random_entries(rng, 64, 30);
    PirDb db = build_pir_db(0, e, 600, privacy::dp_params(1.0, 0.1, 2), test_key(), rng, kSmall, 0,
                            small_filters());
    std::size_t real = 0;
    for (std::size_t c : db.real_counts) real += c;
    std::size_t total = 0;
    for (const auto& [l, items] : e) {
      total += items.size();
      for (const RiskItem& it : items) EXPECT_TRUE(payload_contains(db.lookup(l), it.eph));
    }
    EXPECT_EQ(real, total);
    for (const Bytes& b : db.blocks) EXPECT_LE(b.size(), 600u);
  }
}

TEST(BuildPirDb, SingleTileOverCapThrows) {
  Rng rng(5);
  TileEntries e;
  for (int i = 0; i < 500; ++i) e[3].push_back({testing::random_eph(rng), 0});
  EXPECT_THROW(build_pir_db(0, e, 2000, privacy::dp_params(1.0, 0.1, 2), test_key(), rng, kSmall, 0,
                            small_filters()),
               CapacityError);
}

TEST(BuildPirDb, Deterministic) {
  Rng a(6), b(6);
  Rng src(60);
  TileEntries e = random_entries(src, 64, 30);
  auto dp = privacy::dp_params(1.0, 0.1, 2);
  EXPECT_EQ(build_pir_db(1, e, 600, dp, test_key(), a, kSmall, 3, small_filters()),
            build_pir_db(1, e, 600, dp, test_key(), b, kSmall, 3, small_filters()));
}

TEST(GenQuery, SharesDifferInTargetOnly) {
  Rng rng(7);
  for (std::uint32_t target : {0u, 1u, 63u, 64u, 1000u, 4095u}) {
    auto [q1, q2] = gen_query(target, 4096, rng);
    BitVector d = q1 ^ q2;
    EXPECT_EQ(d.popcount(), 1u);
    EXPECT_TRUE(d.get(target));
  }
  EXPECT_THROW(gen_query(4096, 4096, rng), RangeError);
}

TEST(GenQuery, DefaultDomainSize) {
  Rng rng(8);
  TilingParams t;
  auto [q1, q2] = gen_query(5, t.domain_size(), rng);
  EXPECT_EQ(q1.size(), std::size_t{1} << 21);
  EXPECT_EQ(serialized_query_size(q1.size()) - 8, 256u * 1024u);
}

TEST(FoldQuery, IdentityWhenEveryTileIsABlock) {
  Rng rng(9);
  PirDb db = replicate_blocks(build_pir_db(0, {}, 1 << 20, privacy::dp_params(1.0, 0.1, 2),
                                           test_key(), rng, kSmall));
  auto [q1, q2] = gen_query(17, 64, rng);
  EXPECT_EQ(fold_query(q1, db), q1);
}

TEST(FoldQuery, SingleDifferingBitAtTargetBlock) {
  Rng rng(10);
  PirDb db = build_pir_db(0, random_entries(rng, 64, 40), 500, privacy::dp_params(1.0, 0.1, 2),
                          test_key(), rng, kSmall, 0, small_filters());
  for (std::uint32_t target = 0; target < 64; ++target) {
    auto [q1, q2] = gen_query(target, 64, rng);
    BitVector d = fold_query(q1, db) ^ fold_query(q2, db);
    EXPECT_EQ(d.popcount(), 1u);
    EXPECT_TRUE(d.get(db.layout[target]));
  }
}

TEST(EvalQuery, ZeroQueryGivesZeros) {
  Rng rng(11);
  PirDb db = build_pir_db(0, {}, 1 << 20, privacy::dp_params(1.0, 0.1, 2), test_key(), rng, kSmall);
  PirResponseShare r = eval_query(db, BitVector(db.blocks.size()));
  EXPECT_EQ(r.bytes.size(), db.max_block_size());
  EXPECT_TRUE(std::all_of(r.bytes.begin(), r.bytes.end(), [](auto b) { return b == 0; }));
}

TEST(EvalQuery, SingleBlockPadded) {
  PirDb db;
  db.layout = {0, 1};
  db.blocks = {Bytes{1, 2, 3}, Bytes(13, 0xff)};
  db.real_counts = {0, 0};
  db.junk_counts = {0, 0};
  BitVector q(2);
  q.set(0, true);
  Bytes expect(13, 0);
  expect[0] = 1;
  expect[1] = 2;
  expect[2] = 3;
  EXPECT_EQ(eval_query(db, q).bytes, expect);
}

TEST(EvalQuery, MatchesNaiveXor) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    PirDb db;
    for (std::uint32_t b = 0; b < 8; ++b) {
      Bytes block(rng.below(100) + 1);
      rng.fill(block);
      db.blocks.push_back(block);
      db.layout.push_back(b);
    }
    BitVector q = BitVector::random(8, rng);
    EvalStats stats;
    PirResponseShare r = eval_query(db, q, &stats);
    Bytes naive(db.max_block_size(), 0);
    for (std::size_t b = 0; b < 8; ++b) {
      if (!q.get(b)) continue;
      for (std::size_t i = 0; i < db.blocks[b].size(); ++i) naive[i] ^= db.blocks[b][i];
    }
    EXPECT_EQ(r.bytes, naive);
    EXPECT_EQ(stats.blocks_touched, 8u);
  }
}

TEST(EvalQuery, WorkIndependentOfQuery) {
  Rng rng(13);
  PirDb db = build_pir_db(0, random_entries(rng, 64, 40), 500, privacy::dp_params(1.0, 0.1, 2),
                          test_key(), rng, kSmall, 0, small_filters());
  EvalStats zero, ones;
  eval_query(db, BitVector(db.blocks.size()), &zero);
  BitVector all(db.blocks.size());
  for (std::size_t i = 0; i < all.size(); ++i) all.set(i, true);
  eval_query(db, all, &ones);
  EXPECT_EQ(zero.blocks_touched, db.blocks.size());
  EXPECT_EQ(zero.blocks_touched, ones.blocks_touched);
  EXPECT_EQ(zero.bytes_xored, ones.bytes_xored);
}

TEST(Combine, Properties) {
  Rng rng(14);
  PirResponseShare a{Bytes(32)}, b{Bytes(32)};
  rng.fill(a.bytes);
  rng.fill(b.bytes);
  EXPECT_EQ(combine(a, a), Bytes(32, 0));
  EXPECT_EQ(combine(PirResponseShare{combine(a, b)}, b), a.bytes);
  EXPECT_THROW(combine(a, PirResponseShare{Bytes(31)}), ParameterError);
}

TEST(EndToEnd, EveryTargetRetrievesItsBlock) {
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    PirDb db = build_pir_db(0, random_entries(rng, 64, 40), 500, privacy::dp_params(1.0, 0.1, 2),
                            test_key(), rng, kSmall, 0, small_filters());
    PirDb flat = replicate_blocks(db);
    for (std::uint32_t target = 0; target < 64; ++target) {
      auto [q1, q2] = gen_query(target, 64, rng);
      Bytes got = combine(eval_query(db, fold_query(q1, db)), eval_query(db, fold_query(q2, db)));
      Bytes expect = db.lookup(target);
      expect.resize(db.max_block_size(), 0);
      ASSERT_EQ(got, expect);
      Bytes flat_got =
          combine(eval_query(flat, fold_query(q1, flat)), eval_query(flat, fold_query(q2, flat)));
      ASSERT_EQ(flat_got, got);
      EXPECT_EQ(cuckoo::parse_payload(got), cuckoo::parse_payload(db.lookup(target)));
    }
  }
}

TEST(Wire, QueryRoundTrip) {
  Rng rng(16);
  for (std::size_t domain : {8u, 64u, 100u, 4096u}) {
    PirQueryMessage m{3, 9, BitVector::random(domain, rng)};
    Bytes b = serialize_query(m);
    EXPECT_EQ(b.size(), serialized_query_size(domain));
    EXPECT_EQ(parse_query(b, domain), m);
  }
  PirQueryMessage m{0, 0, BitVector(16)};
  m.share.set(0, true);
  m.share.set(9, true);
  EXPECT_EQ(to_hex(serialize_query(m)), "00000000000000000102");
  EXPECT_THROW(parse_query(serialize_query(m), 24), FormatError);
}

TEST(Wire, ResponseRoundTrip) {
  PirResponseShare r{Bytes{9, 8, 7}};
  Bytes b = serialize_response(r);
  EXPECT_EQ(to_hex(b), "00000003090807");
  EXPECT_EQ(parse_response(b), r);
  b.pop_back();
  EXPECT_THROW(parse_response(b), FormatError);
}

}  // namespace
}  // namespace silmarillion::pir
