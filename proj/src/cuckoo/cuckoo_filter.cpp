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

#include "silmarillion/cuckoo/cuckoo_filter.hpp"

#include <bit>
#include <string>
#include <utility>

#include "silmarillion/core/crypto.hpp"
#include "silmarillion/core/errors.hpp"

namespace silmarillion::cuckoo {

namespace {

constexpr std::size_t kHeaderSize = 8;

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint32_t fingerprint_mask(std::uint32_t bits) {
  return bits >= 32 ? 0xffffffffu : ((std::uint32_t{1} << bits) - 1);
}

}  // namespace

void CuckooParams::validate() const {
  if (fingerprint_bits < 8 || fingerprint_bits > 32) {
    throw ParameterError("fingerprint_bits must lie in [8, 32], got " +
                         std::to_string(fingerprint_bits));
  }
  if (num_indices == 0 || !std::has_single_bit(num_indices) || num_indices > 0x8000) {
    throw ParameterError("num_indices must be a power of two <= 32768, got " +
                         std::to_string(num_indices));
  }
  if (bucket_size == 0 || bucket_size > 0xffff || max_kicks > 0xffff) {
    throw ParameterError("bucket_size and max_kicks must fit 16 bits");
  }
}

Probe fingerprint_and_indices(const EphemeralId& item, const CuckooParams& params) {
  Digest d = sha256(item.bytes);
  Probe p;
  p.fingerprint = load_be32(d.data() + 28) & fingerprint_mask(params.fingerprint_bits);
  if (p.fingerprint == 0) p.fingerprint = 1;
  p.index1 = static_cast<std::uint32_t>(load_be64(d.data()) & (params.num_indices - 1));
  p.index2 = alternate_index(p.index1, p.fingerprint, params);
  return p;
}

std::uint32_t alternate_index(std::uint32_t index, std::uint32_t fingerprint,
                              const CuckooParams& params) {
  return index ^ static_cast<std::uint32_t>(mix64(fingerprint) & (params.num_indices - 1));
}

CuckooFilter::CuckooFilter(CuckooParams params, bool annotated) : params_(params) {
  params_.validate();
  slots_.assign(params_.capacity(), 0);
  if (annotated) annotations_.assign(params_.capacity(), 0);
}

bool CuckooFilter::try_place(std::uint32_t bucket, std::uint32_t fingerprint,
                             std::uint64_t annotation) {
  const std::size_t base = std::size_t{bucket} * params_.bucket_size;
  for (std::size_t i = base; i < base + params_.bucket_size; ++i) {
    if (slots_[i] == 0) {
      slots_[i] = fingerprint;
      if (!annotations_.empty()) annotations_[i] = annotation;
      ++count_;
      return true;
    }
  }
  return false;
}

bool CuckooFilter::insert(const EphemeralId& item, Rng& rng, std::uint64_t annotation) {
  return insert(fingerprint_and_indices(item, params_), rng, annotation);
}

bool CuckooFilter::insert(const Probe& probe, Rng& rng, std::uint64_t annotation) {
  if (try_place(probe.index1, probe.fingerprint, annotation)) return true;
  if (try_place(probe.index2, probe.fingerprint, annotation)) return true;

  struct Displacement {
    std::size_t slot;
    std::uint32_t fingerprint;
    std::uint64_t annotation;
  };
  std::vector<Displacement> path;
  path.reserve(params_.max_kicks);

  std::uint32_t fingerprint = probe.fingerprint;
  std::uint64_t carried = annotation;
  std::uint32_t bucket = rng.bernoulli(0.5) ? probe.index1 : probe.index2;
  for (std::uint32_t kick = 0; kick < params_.max_kicks; ++kick) {
    const std::size_t slot =
        std::size_t{bucket} * params_.bucket_size + rng.below(params_.bucket_size);
    path.push_back({slot, slots_[slot], annotations_.empty() ? 0 : annotations_[slot]});
    std::swap(fingerprint, slots_[slot]);
    if (!annotations_.empty()) std::swap(carried, annotations_[slot]);
    bucket = alternate_index(bucket, fingerprint, params_);
    if (try_place(bucket, fingerprint, carried)) return true;
  }

  // Roll the relocation chain back so no earlier item is lost.
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    slots_[it->slot] = it->fingerprint;
    if (!annotations_.empty()) annotations_[it->slot] = it->annotation;
  }
  return false;
}

bool CuckooFilter::contains(const EphemeralId& item) const {
  return contains(fingerprint_and_indices(item, params_));
}

bool CuckooFilter::contains(const Probe& probe) const {
  const std::uint32_t b = params_.bucket_size;
  const std::uint32_t* first = slots_.data() + std::size_t{probe.index1} * b;
  const std::uint32_t* second = slots_.data() + std::size_t{probe.index2} * b;
  for (std::uint32_t i = 0; i < b; ++i) {
    if (first[i] == probe.fingerprint || second[i] == probe.fingerprint) return true;
  }
  return false;
}

std::vector<std::uint64_t> CuckooFilter::matching_annotations(const Probe& probe) const {
  std::vector<std::uint64_t> out;
  const std::uint32_t b = params_.bucket_size;
  auto scan = [&](std::uint32_t bucket) {
    for (std::uint32_t i = 0; i < b; ++i) {
      const std::size_t s = std::size_t{bucket} * b + i;
      if (slots_[s] == probe.fingerprint) out.push_back(annotations_.empty() ? 0 : annotations_[s]);
    }
  };
  scan(probe.index1);
  if (probe.index2 != probe.index1) scan(probe.index2);
  return out;
}

std::size_t CuckooFilter::serialized_size(const CuckooParams& params) {
  return kHeaderSize + (params.capacity() * params.fingerprint_bits + 7) / 8;
}

Bytes CuckooFilter::serialize() const {
  Bytes out;
  serialize_to(out);
  return out;
}

void CuckooFilter::serialize_to(Bytes& out) const {
  out.reserve(out.size() + serialized_size(params_));
  ByteWriter w(out);
  w.u16(static_cast<std::uint16_t>(params_.fingerprint_bits));
  w.u16(static_cast<std::uint16_t>(params_.bucket_size));
  w.u16(static_cast<std::uint16_t>(params_.num_indices));
  w.u16(static_cast<std::uint16_t>(params_.max_kicks));

  const std::uint32_t bits = params_.fingerprint_bits;
  std::uint64_t acc = 0;
  std::uint32_t pending = 0;
  for (std::uint32_t fp : slots_) {
    acc = (acc << bits) | fp;
    pending += bits;
    while (pending >= 8) {
      pending -= 8;
      out.push_back(static_cast<std::uint8_t>(acc >> pending));
    }
    acc &= (std::uint64_t{1} << pending) - 1;
  }
  if (pending > 0) out.push_back(static_cast<std::uint8_t>(acc << (8 - pending)));
}

CuckooFilter CuckooFilter::parse(ByteSpan bytes, bool annotated) {
  ByteReader r(bytes);
  CuckooParams params;
  params.fingerprint_bits = r.u16();
  params.bucket_size = r.u16();
  params.num_indices = r.u16();
  params.max_kicks = r.u16();
  try {
    params.validate();
  } catch (const ParameterError& e) {
    throw FormatError(std::string("bad cuckoo filter header: ") + e.what());
  }
  if (bytes.size() != serialized_size(params)) {
    throw FormatError("cuckoo filter body has " + std::to_string(bytes.size()) +
                      " bytes, expected " + std::to_string(serialized_size(params)));
  }
  CuckooFilter filter(params, annotated);
  const std::uint32_t bits = params.fingerprint_bits;
  const std::uint32_t mask = fingerprint_mask(bits);
  std::uint64_t acc = 0;
  std::uint32_t have = 0;
  std::size_t pos = kHeaderSize;
  for (std::uint32_t& slot : filter.slots_) {
    while (have < bits) {
      acc = (acc << 8) | bytes[pos++];
      have += 8;
    }
    have -= bits;
    slot = static_cast<std::uint32_t>(acc >> have) & mask;
    acc &= (std::uint64_t{1} << have) - 1;
    if (slot != 0) ++filter.count_;
  }
  if (have > 0 && acc != 0) throw FormatError("non-zero padding in cuckoo filter");
  return filter;
}

}  // namespace silmarillion::cuckoo
