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

#include "silmarillion/cuckoo/risk_chunk.hpp"

#include <string>

#include "silmarillion/core/errors.hpp"

namespace silmarillion::cuckoo {

std::size_t serialized_chunk_size(const CuckooParams& params, bool annotated) {
  std::size_t body = CuckooFilter::serialized_size(params);
  if (annotated) body += params.capacity() * kAnnotationSize;
  return kChunkHeaderSize + body;
}

void append_chunk(Bytes& out, const RiskChunk& chunk) {
  const CuckooParams& p = chunk.filter.params();
  const std::size_t body_len = serialized_chunk_size(p, chunk.filter.annotated()) - kChunkHeaderSize;
  if (body_len > 0xffff) {
    throw ParameterError("chunk body of " + std::to_string(body_len) + " bytes exceeds 16-bit length");
  }
  ByteWriter w(out);
  w.u32(chunk.payload_id);
  w.u16(chunk.chunk_id);
  w.u16(chunk.total_chunks);
  w.u16(static_cast<std::uint16_t>(body_len));
  chunk.filter.serialize_to(out);
  if (chunk.filter.annotated()) {
    for (std::uint32_t b = 0; b < p.num_indices; ++b) {
      for (std::uint32_t s = 0; s < p.bucket_size; ++s) {
        const std::uint64_t a = chunk.filter.annotation(b, s);
        w.u32(annotation_start(a));
        w.u8(annotation_interval(a));
      }
    }
  }
}

Bytes serialize_chunk(const RiskChunk& chunk) {
  Bytes out;
  append_chunk(out, chunk);
  return out;
}

RiskChunk parse_chunk(ByteSpan bytes, std::size_t* consumed) {
  ByteReader r(bytes);
  RiskChunk chunk;
  chunk.payload_id = r.u32();
  chunk.chunk_id = r.u16();
  chunk.total_chunks = r.u16();
  const std::uint16_t body_len = r.u16();
  if (chunk.chunk_id >= chunk.total_chunks) {
    throw FormatError("chunk id " + std::to_string(chunk.chunk_id) + " not below total " +
                      std::to_string(chunk.total_chunks));
  }
  ByteSpan body = r.bytes(body_len);
  if (body.size() < 8) throw FormatError("chunk body too short for a filter header");

  CuckooParams params;
  params.fingerprint_bits = load_be32(body.data()) >> 16;
  params.bucket_size = load_be32(body.data()) & 0xffff;
  params.num_indices = load_be32(body.data() + 4) >> 16;
  params.max_kicks = load_be32(body.data() + 4) & 0xffff;
  try {
    params.validate();
  } catch (const ParameterError& e) {
    throw FormatError(std::string("bad cuckoo filter header: ") + e.what());
  }
  const std::size_t filter_len = CuckooFilter::serialized_size(params);
  const bool annotated = body.size() > filter_len;
  if (annotated && body.size() != filter_len + params.capacity() * kAnnotationSize) {
    throw FormatError("chunk body length " + std::to_string(body.size()) +
                      " matches neither plain nor annotated layout");
  }
  chunk.filter = CuckooFilter::parse(body.first(filter_len), annotated);
  if (annotated) {
    ByteReader notes(body.subspan(filter_len));
    for (std::uint32_t b = 0; b < params.num_indices; ++b) {
      for (std::uint32_t s = 0; s < params.bucket_size; ++s) {
        const std::uint32_t start = notes.u32();
        chunk.filter.set_annotation(b, s, pack_interval_annotation(start, notes.u8()));
      }
    }
  }
  if (consumed) *consumed = r.position();
  return chunk;
}

std::vector<RiskChunk> chunk_risk_set(
    std::span<const EphemeralId> items, const CuckooParams& params, std::uint32_t payload_id,
    Rng& rng, std::optional<std::span<const std::uint64_t>> annotations) {
  const bool annotated = annotations.has_value();
  if (annotated && annotations->size() != items.size()) {
    throw ParameterError("annotations must be parallel to items");
  }
  std::vector<RiskChunk> chunks;
  chunks.push_back({payload_id, 0, 1, CuckooFilter(params, annotated)});
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Probe probe = fingerprint_and_indices(items[i], params);
    const std::uint64_t note = annotated ? (*annotations)[i] : 0;
    if (chunks.back().filter.insert(probe, rng, note)) continue;
    if (chunks.size() == 0xffff) throw CapacityError("risk set needs more than 65535 chunks");
    chunks.push_back({payload_id, static_cast<std::uint16_t>(chunks.size()), 1,
                      CuckooFilter(params, annotated)});
    if (!chunks.back().filter.insert(probe, rng, note)) {
      throw CapacityError("item does not fit an empty cuckoo filter");
    }
  }
  for (RiskChunk& c : chunks) c.total_chunks = static_cast<std::uint16_t>(chunks.size());
  return chunks;
}

}  // namespace silmarillion::cuckoo
