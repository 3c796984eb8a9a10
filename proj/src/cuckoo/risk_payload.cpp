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

#include "silmarillion/cuckoo/risk_payload.hpp"

#include <algorithm>
#include <string>
#include <string_view>

#include "silmarillion/core/errors.hpp"

namespace silmarillion::cuckoo {

namespace {

constexpr std::string_view kContext = "risk-payload";

std::vector<Digest> chunk_digests(const std::vector<RiskChunk>& chunks) {
  std::vector<Digest> out;
  out.reserve(chunks.size());
  Bytes buf;
  for (const RiskChunk& c : chunks) {
    buf.clear();
    append_chunk(buf, c);
    out.push_back(sha256(buf));
  }
  return out;
}

}  // namespace

Bytes payload_signing_message(std::uint32_t payload_id, std::uint16_t total_chunks,
                              std::span<const Digest> digests) {
  Bytes msg(kContext.begin(), kContext.end());
  ByteWriter w(msg);
  w.u32(payload_id);
  w.u16(total_chunks);
  for (const Digest& d : digests) w.bytes(d);
  return msg;
}

RiskPayload sign_payload(std::uint32_t payload_id, std::vector<RiskChunk> chunks,
                         const SigningKey& key) {
  if (chunks.empty() || chunks.size() > 0xffff) {
    throw ParameterError("a payload needs between 1 and 65535 chunks");
  }
  const auto total = static_cast<std::uint16_t>(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    chunks[i].payload_id = payload_id;
    chunks[i].chunk_id = static_cast<std::uint16_t>(i);
    chunks[i].total_chunks = total;
  }
  RiskPayload p;
  p.payload_id = payload_id;
  p.signature = key.sign(payload_signing_message(payload_id, total, chunk_digests(chunks)));
  p.chunks = std::move(chunks);
  return p;
}

bool verify_payload(const RiskPayload& payload, const PublicKey& key) {
  if (payload.chunks.empty() || payload.chunks.size() > 0xffff) return false;
  const auto total = static_cast<std::uint16_t>(payload.chunks.size());
  for (std::size_t i = 0; i < payload.chunks.size(); ++i) {
    const RiskChunk& c = payload.chunks[i];
    if (c.payload_id != payload.payload_id || c.chunk_id != i || c.total_chunks != total) {
      return false;
    }
  }
  return verify_signature(
      key, payload_signing_message(payload.payload_id, total, chunk_digests(payload.chunks)),
      payload.signature);
}

Bytes serialize_payload(const RiskPayload& payload) {
  Bytes out(payload.signature.begin(), payload.signature.end());
  for (const RiskChunk& c : payload.chunks) append_chunk(out, c);
  return out;
}

RiskPayload parse_payload(ByteSpan bytes) {
  if (bytes.size() < kSignatureSize) throw FormatError("payload shorter than its signature");
  RiskPayload p;
  std::copy_n(bytes.begin(), kSignatureSize, p.signature.begin());
  std::size_t pos = kSignatureSize;
  std::size_t total = 1;
  while (p.chunks.size() < total) {
    std::size_t used = 0;
    RiskChunk c = parse_chunk(bytes.subspan(pos), &used);
    pos += used;
    if (p.chunks.empty()) {
      total = c.total_chunks;
      p.payload_id = c.payload_id;
    } else if (c.total_chunks != total || c.payload_id != p.payload_id) {
      throw FormatError("chunk headers disagree within one payload");
    }
    if (c.chunk_id != p.chunks.size()) {
      throw FormatError("chunk " + std::to_string(c.chunk_id) + " out of order");
    }
    p.chunks.push_back(std::move(c));
  }
  if (!std::all_of(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end(),
                   [](std::uint8_t b) { return b == 0; })) {
    throw FormatError("non-zero bytes after the last chunk");
  }
  return p;
}

}  // namespace silmarillion::cuckoo
