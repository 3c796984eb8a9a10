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

#include "silmarillion/backend/risk_pipeline.hpp"

#include <algorithm>

#include "silmarillion/cuckoo/risk_chunk.hpp"

namespace silmarillion::backend {

namespace {

struct Hull {
  std::uint32_t start = 0;
  std::uint32_t end = 0;
};

std::vector<pir::RiskItem> to_items(const std::map<EphemeralId, Hull>& ids) {
  std::vector<pir::RiskItem> items;
  items.reserve(ids.size());
  for (const auto& [eph, h] : ids) {
    const std::uint8_t len = saturate_interval(Minutes{h.end} - Minutes{h.start});
    items.push_back({eph, cuckoo::pack_interval_annotation(h.start, len)});
  }
  return items;
}

}  // namespace

std::size_t DailyRisk::broadcast_bytes() const {
  std::size_t n = 0;
  for (const auto& [tile, b] : broadcast) n += b.wire.size();
  return n;
}

std::vector<RiskDbEntry> prune_riskdb(std::span<const RiskDbEntry> riskdb, Minutes now) {
  std::vector<RiskDbEntry> out;
  for (const RiskDbEntry& e : riskdb) {
    if (e.real_time >= now - kRetentionMinutes) out.push_back(e);
  }
  return out;
}

DailyRisk assemble_daily_risk(std::span<const RiskDbEntry> riskdb, std::uint32_t day,
                              std::span<const LocationId> tiles, const PipelineParams& params,
                              const SigningKey& key, const Rng& rng) {
  params.tiling.validate();
  std::map<LocationId, std::map<EphemeralId, Hull>> by_tile;
  for (LocationId t : tiles) by_tile[t];
  for (const RiskDbEntry& e : riskdb) {
    const std::uint32_t end = e.t_start_b + e.t_int_b;
    auto [it, fresh] = by_tile[e.loc].try_emplace(e.eph, Hull{e.t_start_b, end});
    if (!fresh) {
      it->second.start = std::min(it->second.start, e.t_start_b);
      it->second.end = std::max(it->second.end, end);
    }
  }

  DailyRisk out;
  out.day = day;
  const Rng broadcast_rng = rng.derive("broadcast", day);
  std::map<std::uint32_t, pir::TileEntries> by_h;
  for (const auto& [tile, ids] : by_tile) {
    std::vector<pir::RiskItem> items = to_items(ids);
    Rng tile_rng = broadcast_rng.derive("tile", tile.packed);
    TileBroadcast b;
    b.tile = tile;
    b.noised = pir::build_noised_payload(items, params.dp, day, key, tile_rng, params.payload);
    b.wire = cuckoo::serialize_payload(b.noised.payload);
    out.broadcast.emplace(tile, std::move(b));
    if (params.build_pir) {
      auto& entries = by_h[h_tile_of(tile, params.tiling)][l_index_in_h_tile(tile, params.tiling)];
      entries.insert(entries.end(), items.begin(), items.end());
    }
  }

  const Rng pir_rng = rng.derive("pir", day);
  for (const auto& [h, entries] : by_h) {
    Rng h_rng = pir_rng.derive("h-tile", h);
    out.pir.emplace(h, pir::build_pir_db(h, entries, params.block_cap, params.dp, key, h_rng,
                                         params.tiling, day, params.payload));
  }
  return out;
}

}  // namespace silmarillion::backend
