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
#include <span>
#include <vector>

#include "silmarillion/core/bytes.hpp"
#include "silmarillion/core/crypto.hpp"
#include "silmarillion/cuckoo/risk_chunk.hpp"

namespace silmarillion::cuckoo {

// A signed chunk set.  The signature covers
//   "risk-payload" || payload_id(4) || total_chunks(2) || SHA-256(chunk_k)...
// so a receiver can hash chunks as they stream past and check the signature
// once the last one arrives, without buffering more than one chunk.
struct RiskPayload {
  std::uint32_t payload_id = 0;
  Signature signature{};
  std::vector<RiskChunk> chunks;

  bool operator==(const RiskPayload&) const = default;
};

Bytes payload_signing_message(std::uint32_t payload_id, std::uint16_t total_chunks,
                              std::span<const Digest> chunk_digests);

RiskPayload sign_payload(std::uint32_t payload_id, std::vector<RiskChunk> chunks,
                         const SigningKey& key);
bool verify_payload(const RiskPayload& payload, const PublicKey& key);

// signature(64) || chunk_0 || ... || chunk_{n-1}.
Bytes serialize_payload(const RiskPayload& payload);
// Trailing zero bytes after the last chunk are accepted and ignored (PIR
// responses are zero-extended to the largest block).
RiskPayload parse_payload(ByteSpan bytes);

}  // namespace silmarillion::cuckoo
