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

#include "silmarillion/pir/pir_db.hpp"

#include <algorithm>
#include <string>

#include "silmarillion/core/errors.hpp"

namespace silmarillion::pir {

NoisedPayload build_noised_payload(std::span<const RiskItem> real, const privacy::DpParams& dp,
                                   std::uint32_t payload_id, const SigningKey& key, Rng& rng,
                                   const PayloadOptions& options) {
  const std::size_t junk = privacy::sample_junk_count(dp, rng);
  std::vector<RiskItem> items(real.begin(), real.end());
  items.reserve(real.size() + junk);
  for (const EphemeralId& id : privacy::generate_junk_ids(junk, rng)) {
    RiskItem item{id, 0};
    if (options.annotated) {
      item.annotation = real.empty() ? (rng.next_u64() & 0xffffffffffULL)
                                     : real[rng.below(real.size())].annotation;
    }
    items.push_back(item);
  }
  rng.shuffle(std::span<RiskItem>(items));

  std::vector<EphemeralId> ids;
  std::vector<std::uint64_t> notes;
  ids.reserve(items.size());
  for (const RiskItem& it : items) {
    ids.push_back(it.eph);
    if (options.annotated) notes.push_back(it.annotation);
  }
  std::optional<std::span<const std::uint64_t>> note_span;
  if (options.annotated) note_span = notes;
  auto chunks = cuckoo::chunk_risk_set(ids, options.cuckoo, payload_id, rng, note_span);
  NoisedPayload out;
  out.payload = cuckoo::sign_payload(payload_id, std::move(chunks), key);
  out.real_count = real.size();
  out.junk_count = junk;
  return out;
}

std::size_t PirDb::max_block_size() const {
  std::size_t m = 0;
  for (const Bytes& b : blocks) m = std::max(m, b.size());
  return m;
}

PirDb build_pir_db(std::uint32_t h_tile, const TileEntries& entries, std::size_t block_cap,
                   const privacy::DpParams& dp, const SigningKey& key, Rng& rng,
                   const TilingParams& tiling, std::uint32_t payload_id,
                   const PayloadOptions& options) {
  tiling.validate();
  PirDb db;
  db.tiling = tiling;
  db.h_tile = h_tile;
  db.payload_id = payload_id;
  db.block_cap = block_cap;
  db.layout.assign(tiling.domain_size(), 0);

  const std::uint32_t per_m = tiling.l_tiles_per_m_tile();
  if (!entries.empty() && entries.rbegin()->first >= tiling.domain_size()) {
    throw RangeError("L-index " + std::to_string(entries.rbegin()->first) +
                     " outside the H-tile domain");
  }

  auto add_block = [&](const NoisedPayload& p) {
    db.blocks.push_back(cuckoo::serialize_payload(p.payload));
    db.real_counts.push_back(p.real_count);
    db.junk_counts.push_back(p.junk_count);
    return static_cast<std::uint32_t>(db.blocks.size() - 1);
  };

  for (std::uint32_t m = 0; m < tiling.m_tiles_per_h_tile(); ++m) {
    const std::uint32_t first = m * per_m;
    auto lo = entries.lower_bound(first);
    auto hi = entries.lower_bound(first + per_m);

    std::vector<RiskItem> subtree;
    for (auto it = lo; it != hi; ++it) subtree.insert(subtree.end(), it->second.begin(), it->second.end());
    NoisedPayload whole = build_noised_payload(subtree, dp, payload_id, key, rng, options);
    if (cuckoo::serialize_payload(whole.payload).size() <= block_cap) {
      const std::uint32_t ordinal = add_block(whole);
      std::fill_n(db.layout.begin() + first, per_m, ordinal);
      continue;
    }
    for (std::uint32_t l = first; l < first + per_m; ++l) {
      auto it = entries.find(l);
      std::span<const RiskItem> own;
      if (it != entries.end()) own = it->second;
      NoisedPayload part = build_noised_payload(own, dp, payload_id, key, rng, options);
      const std::size_t size = cuckoo::serialize_payload(part.payload).size();
      if (size > block_cap) {
        throw CapacityError("L-tile " + std::to_string(l) + " of H-tile " + std::to_string(h_tile) +
                            " needs " + std::to_string(size) + " bytes, block cap is " +
                            std::to_string(block_cap));
      }
      db.layout[l] = add_block(part);
    }
  }
  return db;
}

PirDb replicate_blocks(const PirDb& db) {
  PirDb out = db;
  out.blocks.clear();
  out.real_counts.clear();
  out.junk_counts.clear();
  for (std::uint32_t i = 0; i < db.layout.size(); ++i) {
    const std::uint32_t b = db.layout[i];
    out.blocks.push_back(db.blocks[b]);
    out.real_counts.push_back(db.real_counts[b]);
    out.junk_counts.push_back(db.junk_counts[b]);
    out.layout[i] = i;
  }
  return out;
}

}  // namespace silmarillion::pir
