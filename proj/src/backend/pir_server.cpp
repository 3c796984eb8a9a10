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

#include "silmarillion/backend/pir_server.hpp"

#include <string>

#include "silmarillion/core/errors.hpp"

namespace silmarillion::backend {

namespace {

const Bytes kResponseAad{'p', 'i', 'r', '-', 'r', 'e', 's', 'p'};

}  // namespace

AeadKey pir_session_key(std::uint32_t server_index, const Otp& otp) {
  Bytes material;
  ByteWriter w(material);
  w.u32(server_index);
  w.bytes(otp);
  return derive_key("pir", material);
}

Bytes seal_pir_request(const PirSessionHeader& header, const AeadKey& key, ByteSpan query_wire, Rng& rng) {
  Bytes out;
  ByteWriter w(out);
  w.u32(header.dongle.value);
  w.u16(header.otp_index);
  AeadNonce nonce;
  rng.fill(nonce);
  const Bytes aad = out;
  w.bytes(aead_seal(key, nonce, aad, query_wire));
  return out;
}

PirSessionHeader peek_pir_request(ByteSpan request) {
  ByteReader r(request);
  PirSessionHeader h;
  h.dongle.value = r.u32();
  h.otp_index = r.u16();
  return h;
}

std::optional<pir::PirResponseShare> open_pir_response(const AeadKey& key, ByteSpan sealed) {
  auto plain = aead_open(key, kResponseAad, sealed);
  if (!plain) return std::nullopt;
  return pir::parse_response(*plain);
}

void PirServer::publish(const std::map<std::uint32_t, pir::PirDb>& dbs) {
  dbs_.clear();
  for (const auto& [h, db] : dbs) dbs_.emplace(h, dedup_ ? db : pir::replicate_blocks(db));
}

const pir::PirDb* PirServer::database(std::uint32_t h_tile) const {
  auto it = dbs_.find(h_tile);
  return it == dbs_.end() ? nullptr : &it->second;
}

pir::PirResponseShare PirServer::answer(const pir::PirQueryMessage& query) {
  const pir::PirDb* db = database(query.h_tile);
  if (!db) throw RangeError("no PIR database for H-tile " + std::to_string(query.h_tile));
  if (db->payload_id != query.payload_id) {
    throw RangeError("PIR database for H-tile " + std::to_string(query.h_tile) + " is payload " +
                     std::to_string(db->payload_id) + ", query asks for " +
                     std::to_string(query.payload_id));
  }
  pir::EvalStats es;
  pir::PirResponseShare r = pir::eval_query(*db, pir::fold_query(query.share, *db), &es);
  ++stats_.queries;
  stats_.blocks_touched += es.blocks_touched;
  stats_.bytes_xored += es.bytes_xored;
  return r;
}

Bytes PirServer::handle_session(ByteSpan request, const Registry& registry, Rng& rng) {
  const PirSessionHeader h = peek_pir_request(request);
  const DeviceRegistration* reg = registry.find(h.dongle);
  if (!reg || reg->type != DeviceType::kDongle || h.otp_index >= reg->otps.size()) {
    throw AuthenticationError("PIR session from unknown dongle or OTP");
  }
  const AeadKey key = pir_session_key(index_, reg->otps[h.otp_index]);
  auto plain = aead_open(key, request.first(6), request.subspan(6));
  if (!plain) throw AuthenticationError("PIR session failed authentication");

  // The query's domain follows from the H-tile database it names.
  if (plain->size() < 8) throw FormatError("PIR query too short");
  const std::uint32_t h_tile = load_be32(plain->data());
  const pir::PirDb* db = database(h_tile);
  if (!db) throw RangeError("no PIR database for H-tile " + std::to_string(h_tile));
  const pir::PirQueryMessage query = pir::parse_query(*plain, db->domain_size());
  const Bytes response = pir::serialize_response(answer(query));
  AeadNonce nonce;
  rng.fill(nonce);
  return aead_seal(key, nonce, kResponseAad, response);
}

}  // namespace silmarillion::backend
