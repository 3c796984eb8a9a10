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
#include <vector>

#include "silmarillion/core/bytes.hpp"
#include "silmarillion/core/rng.hpp"
#include "silmarillion/core/types.hpp"

namespace silmarillion::cuckoo {

struct CuckooParams {
  std::uint32_t fingerprint_bits = 27;
  std::uint32_t bucket_size = 4;
  std::uint32_t num_indices = 128;
  std::uint32_t max_kicks = 500;

  // fingerprint_bits in [8, 32], num_indices a power of two; every field must
  // fit the 16-bit serialized header.
  void validate() const;
  std::size_t capacity() const { return std::size_t{num_indices} * bucket_size; }

  bool operator==(const CuckooParams&) const = default;
};

// Precomputed lookup key of an item.  Dongles store one per log record so
// that probing a downloaded chunk needs no hashing.
struct Probe {
  std::uint32_t fingerprint = 0;
  std::uint32_t index1 = 0;
  std::uint32_t index2 = 0;

  bool operator==(const Probe&) const = default;
};

// fingerprint: low fingerprint_bits of SHA-256(item), 0 remapped to 1.
// index1: high 64 bits of the same digest mod num_indices.
// index2: index1 XOR (mix(fingerprint) mod num_indices).
Probe fingerprint_and_indices(const EphemeralId& item, const CuckooParams& params);

// The partner bucket of `index` for `fingerprint`.  An involution.
std::uint32_t alternate_index(std::uint32_t index, std::uint32_t fingerprint,
                              const CuckooParams& params);

// Fixed-width fingerprint slots; 0 marks an empty slot.  Optionally carries
// one 40-bit annotation per slot that moves with its fingerprint.
class CuckooFilter {
 public:
  explicit CuckooFilter(CuckooParams params = {}, bool annotated = false);

  // Returns false on overflow, in which case the filter is left exactly as it
  // was before the call.
  [[nodiscard]] bool insert(const EphemeralId& item, Rng& rng, std::uint64_t annotation = 0);
  [[nodiscard]] bool insert(const Probe& probe, Rng& rng, std::uint64_t annotation = 0);

  bool contains(const EphemeralId& item) const;
  bool contains(const Probe& probe) const;

  // Annotations of every slot in the probe's two buckets holding its
  // fingerprint.
  std::vector<std::uint64_t> matching_annotations(const Probe& probe) const;

  const CuckooParams& params() const { return params_; }
  bool annotated() const { return !annotations_.empty(); }
  std::size_t count() const { return count_; }
  double load_factor() const { return static_cast<double>(count_) / params_.capacity(); }

  std::uint32_t slot(std::uint32_t bucket, std::uint32_t position) const {
    return slots_[std::size_t{bucket} * params_.bucket_size + position];
  }
  std::uint64_t annotation(std::uint32_t bucket, std::uint32_t position) const {
    return annotations_[std::size_t{bucket} * params_.bucket_size + position];
  }
  void set_annotation(std::uint32_t bucket, std::uint32_t position, std::uint64_t value) {
    annotations_[std::size_t{bucket} * params_.bucket_size + position] = value;
  }

  // Header fingerprint_bits(2) || bucket_size(2) || num_indices(2) ||
  // max_kicks(2), then the slot array packed MSB-first at fingerprint_bits
  // per slot, zero-padded to a byte boundary.  Annotations are not included.
  Bytes serialize() const;
  void serialize_to(Bytes& out) const;
  // An annotated parse allocates zeroed annotations for the caller to fill.
  static CuckooFilter parse(ByteSpan bytes, bool annotated = false);
  static std::size_t serialized_size(const CuckooParams& params);

  bool operator==(const CuckooFilter&) const = default;

 private:
  bool try_place(std::uint32_t bucket, std::uint32_t fingerprint, std::uint64_t annotation);

  CuckooParams params_;
  std::vector<std::uint32_t> slots_;
  std::vector<std::uint64_t> annotations_;
  std::size_t count_ = 0;
};

}  // namespace silmarillion::cuckoo
