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

#include "silmarillion/devices/pir_session.hpp"

#include "silmarillion/core/errors.hpp"
#include "silmarillion/pir/pir_query.hpp"
#include "silmarillion/pir/pir_wire.hpp"

namespace silmarillion::devices {

PirSession make_pir_request(Dongle& dongle, std::uint32_t payload_id, Rng& rng) {
  const auto otp_index = dongle.next_unused_otp();
  if (!otp_index) throw AuthenticationError("dongle has no unused OTPs");
  dongle.consume_otp(*otp_index);

  PirSession s;
  s.dongle = dongle.id();
  s.otp_index = *otp_index;
  for (std::uint32_t i = 0; i < backend::kPirServerCount; ++i) {
    s.keys[i] = backend::pir_session_key(i, dongle.otp(*otp_index));
  }
  const TilingParams& tiling = dongle.config().tiling;
  const backend::PirSessionHeader header{s.dongle, s.otp_index};
  for (LocationId tile : dongle.visited_tiles()) {
    PirTileQuery q;
    q.tile = tile;
    q.h_tile = h_tile_of(tile, tiling);
    q.l_index = l_index_in_h_tile(tile, tiling);
    auto [a, b] = pir::gen_query(q.l_index, tiling.domain_size(), rng);
    q.requests[0] = backend::seal_pir_request(
        header, s.keys[0], pir::serialize_query({q.h_tile, payload_id, std::move(a)}), rng);
    q.requests[1] = backend::seal_pir_request(
        header, s.keys[1], pir::serialize_query({q.h_tile, payload_id, std::move(b)}), rng);
    s.queries.push_back(std::move(q));
  }
  return s;
}

std::optional<Bytes> recover_block(const PirSession& session, ByteSpan response0, ByteSpan response1) {
  auto r0 = backend::open_pir_response(session.keys[0], response0);
  auto r1 = backend::open_pir_response(session.keys[1], response1);
  if (!r0 || !r1 || r0->bytes.size() != r1->bytes.size()) return std::nullopt;
  return pir::combine(*r0, *r1);
}

bool apply_block(Dongle& dongle, ByteSpan block, const PublicKey& key) {
  cuckoo::RiskPayload payload;
  try {
    payload = cuckoo::parse_payload(block);
  } catch (const FormatError&) {
    return false;
  }
  return dongle.apply_payload(payload, key);
}

}  // namespace silmarillion::devices
