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

#include "silmarillion/pir/pir_wire.hpp"

#include <string>

#include "silmarillion/core/errors.hpp"

namespace silmarillion::pir {

std::size_t serialized_query_size(std::size_t domain_size) { return 8 + (domain_size + 7) / 8; }

Bytes serialize_query(const PirQueryMessage& msg) {
  Bytes out;
  out.reserve(serialized_query_size(msg.share.size()));
  ByteWriter w(out);
  w.u32(msg.h_tile);
  w.u32(msg.payload_id);
  const auto& words = msg.share.words();
  const std::size_t nbytes = (msg.share.size() + 7) / 8;
  for (std::size_t i = 0; i < nbytes; ++i) {
    out.push_back(static_cast<std::uint8_t>(words[i / 8] >> (8 * (i % 8))));
  }
  return out;
}

PirQueryMessage parse_query(ByteSpan bytes, std::size_t domain_size) {
  if (bytes.size() != serialized_query_size(domain_size)) {
    throw FormatError("query message has " + std::to_string(bytes.size()) + " bytes, expected " +
                      std::to_string(serialized_query_size(domain_size)));
  }
  ByteReader r(bytes);
  PirQueryMessage msg;
  msg.h_tile = r.u32();
  msg.payload_id = r.u32();
  msg.share = PirQueryShare(domain_size);
  auto& words = msg.share.words();
  for (std::size_t i = 8; i < bytes.size(); ++i) {
    const std::size_t k = i - 8;
    words[k / 8] |= std::uint64_t{bytes[i]} << (8 * (k % 8));
  }
  if (domain_size % 64 != 0 && (words.back() >> (domain_size % 64)) != 0) {
    throw FormatError("query bits set beyond the domain");
  }
  return msg;
}

Bytes serialize_response(const PirResponseShare& r) {
  Bytes out;
  out.reserve(4 + r.bytes.size());
  ByteWriter w(out);
  w.u32(static_cast<std::uint32_t>(r.bytes.size()));
  w.bytes(r.bytes);
  return out;
}

PirResponseShare parse_response(ByteSpan bytes) {
  ByteReader r(bytes);
  const std::uint32_t len = r.u32();
  if (r.remaining() != len) {
    throw FormatError("response declares " + std::to_string(len) + " bytes, carries " +
                      std::to_string(r.remaining()));
  }
  ByteSpan body = r.bytes(len);
  return PirResponseShare{Bytes(body.begin(), body.end())};
}

}  // namespace silmarillion::pir
