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
#include <optional>

#include "silmarillion/backend/registry.hpp"
#include "silmarillion/core/crypto.hpp"
#include "silmarillion/core/rng.hpp"
#include "silmarillion/pir/pir_db.hpp"
#include "silmarillion/pir/pir_query.hpp"
#include "silmarillion/pir/pir_wire.hpp"

namespace silmarillion::backend {

inline constexpr std::uint32_t kPirServerCount = 2;

// Per-server session key; the two servers never share one.
AeadKey pir_session_key(std::uint32_t server_index, const Otp& otp);

// Session request: dongle_id(4) || otp_index(2) || AEAD(query message).
// Session response: AEAD(response message) under the same key.
struct PirSessionHeader {
  DeviceId dongle;
  std::uint16_t otp_index = 0;
};

Bytes seal_pir_request(const PirSessionHeader& header, const AeadKey& key, ByteSpan query_wire, Rng& rng);
PirSessionHeader peek_pir_request(ByteSpan request);
std::optional<pir::PirResponseShare> open_pir_response(const AeadKey& key, ByteSpan sealed);

struct PirServerStats {
  std::size_t queries = 0;
  std::size_t blocks_touched = 0;
  std::size_t bytes_xored = 0;
};

class PirServer {
 public:
  explicit PirServer(std::uint32_t index, bool dedup = true) : index_(index), dedup_(dedup) {}

  // Replaces the served databases (one per H-tile).
  void publish(const std::map<std::uint32_t, pir::PirDb>& dbs);

  pir::PirResponseShare answer(const pir::PirQueryMessage& query);
  // Decrypts, answers and re-encrypts one session.  Throws
  // AuthenticationError on an unknown dongle or a bad ciphertext.
  Bytes handle_session(ByteSpan request, const Registry& registry, Rng& rng);

  const pir::PirDb* database(std::uint32_t h_tile) const;
  std::uint32_t index() const { return index_; }
  const PirServerStats& stats() const { return stats_; }

 private:
  std::uint32_t index_;
  bool dedup_;
  std::map<std::uint32_t, pir::PirDb> dbs_;
  PirServerStats stats_;
};

}  // namespace silmarillion::backend
