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

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "silmarillion/core/bytes.hpp"
#include "silmarillion/core/crypto.hpp"
#include "silmarillion/core/rng.hpp"
#include "silmarillion/core/tiling.hpp"
#include "silmarillion/cuckoo/risk_payload.hpp"
#include "silmarillion/privacy/dp_noise.hpp"

namespace silmarillion::pir {

struct RiskItem {
  EphemeralId eph;
  std::uint64_t annotation = 0;

  bool operator==(const RiskItem&) const = default;
};

struct PayloadOptions {
  cuckoo::CuckooParams cuckoo;
  // Carry per-slot interval annotations (extended chunk body).
  bool annotated = false;
};

struct NoisedPayload {
  cuckoo::RiskPayload payload;
  std::size_t real_count = 0;
  std::size_t junk_count = 0;
};

// Adds DP-sized junk to `real`, shuffles, cuckoo-encodes and signs.  In
// annotated mode each junk id borrows the annotation of a random real item so
// annotations do not separate junk from real entries.
NoisedPayload build_noised_payload(std::span<const RiskItem> real, const privacy::DpParams& dp,
                                   std::uint32_t payload_id, const SigningKey& key, Rng& rng,
                                   const PayloadOptions& options = {});

// Risk items keyed by L-tile index within one H-tile.
using TileEntries = std::map<std::uint32_t, std::vector<RiskItem>>;

struct PirDb {
  TilingParams tiling;
  std::uint32_t h_tile = 0;
  std::uint32_t payload_id = 0;
  std::size_t block_cap = 0;
  // Serialized signed payloads, ordered by the first L-index mapped to them.
  std::vector<Bytes> blocks;
  // L-index within the H-tile -> block ordinal.
  std::vector<std::uint32_t> layout;
  std::vector<std::size_t> real_counts;
  std::vector<std::size_t> junk_counts;

  std::size_t domain_size() const { return layout.size(); }
  std::size_t max_block_size() const;
  const Bytes& lookup(std::uint32_t l_index) const { return blocks.at(layout.at(l_index)); }

  bool operator==(const PirDb&) const = default;
};

// One block per M-tile if its noised payload fits `block_cap` bytes,
// otherwise one noised block per L-tile of that M-tile.  Throws CapacityError
// if a single L-tile's block exceeds the cap.
PirDb build_pir_db(std::uint32_t h_tile, const TileEntries& entries, std::size_t block_cap,
                   const privacy::DpParams& dp, const SigningKey& key, Rng& rng,
                   const TilingParams& tiling = {}, std::uint32_t payload_id = 0,
                   const PayloadOptions& options = {});

// The same content with one block per L-index (no deduplication).
PirDb replicate_blocks(const PirDb& db);

}  // namespace silmarillion::pir
