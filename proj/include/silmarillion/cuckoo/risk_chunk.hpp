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
#include <optional>
#include <span>
#include <vector>

#include "silmarillion/core/bytes.hpp"
#include "silmarillion/core/rng.hpp"
#include "silmarillion/core/types.hpp"
#include "silmarillion/cuckoo/cuckoo_filter.hpp"

namespace silmarillion::cuckoo {

inline constexpr std::size_t kChunkHeaderSize = 10;
// t_start_b (4) || t_int_b (1) per slot in the extended chunk body.
inline constexpr std::size_t kAnnotationSize = 5;

// Packs a patient's beacon-side interval into a slot annotation.
inline std::uint64_t pack_interval_annotation(std::uint32_t t_start_b, std::uint8_t t_int_b) {
  return (std::uint64_t{t_start_b} << 8) | t_int_b;
}
inline std::uint32_t annotation_start(std::uint64_t a) { return static_cast<std::uint32_t>(a >> 8); }
inline std::uint8_t annotation_interval(std::uint64_t a) { return static_cast<std::uint8_t>(a); }

struct RiskChunk {
  std::uint32_t payload_id = 0;
  std::uint16_t chunk_id = 0;
  std::uint16_t total_chunks = 1;
  CuckooFilter filter;

  bool operator==(const RiskChunk&) const = default;
};

// payload_id(4) || chunk_id(2) || total_chunks(2) || body_len(2) || body.
// The body is the serialized filter, followed by one 5-byte annotation per
// slot when the filter is annotated.
Bytes serialize_chunk(const RiskChunk& chunk);
void append_chunk(Bytes& out, const RiskChunk& chunk);
// Parses one chunk from the front of `bytes`; `consumed` receives its length.
RiskChunk parse_chunk(ByteSpan bytes, std::size_t* consumed = nullptr);
std::size_t serialized_chunk_size(const CuckooParams& params, bool annotated);

// Fills filters in order, opening a new one whenever an insert overflows.
// If `annotations` is given it must be parallel to `items` and the chunks
// carry the extended body.
std::vector<RiskChunk> chunk_risk_set(
    std::span<const EphemeralId> items, const CuckooParams& params, std::uint32_t payload_id,
    Rng& rng, std::optional<std::span<const std::uint64_t>> annotations = std::nullopt);

}  // namespace silmarillion::cuckoo
