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

#include "silmarillion/pir/pir_query.hpp"

#include <bit>
#include <cstring>
#include <string>

#include "silmarillion/core/errors.hpp"

namespace silmarillion::pir {

BitVector BitVector::random(std::size_t bits, Rng& rng) {
  BitVector v(bits);
  for (std::uint64_t& w : v.words_) w = rng.next_u64();
  if (bits % 64 != 0) v.words_.back() &= (std::uint64_t{1} << (bits % 64)) - 1;
  return v;
}

std::size_t BitVector::popcount() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.bits_ != bits_) throw ParameterError("bit vector lengths differ");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

std::pair<PirQueryShare, PirQueryShare> gen_query(std::uint32_t target, std::size_t domain_size,
                                                  Rng& rng) {
  if (target >= domain_size) {
    throw RangeError("query target " + std::to_string(target) + " outside domain of " +
                     std::to_string(domain_size));
  }
  PirQueryShare q1 = BitVector::random(domain_size, rng);
  PirQueryShare q2 = q1;
  q2.flip(target);
  return {std::move(q1), std::move(q2)};
}

BitVector fold_query(const PirQueryShare& share, const PirDb& db) {
  if (share.size() != db.domain_size()) {
    throw ParameterError("query share has " + std::to_string(share.size()) +
                         " bits, database domain is " + std::to_string(db.domain_size()));
  }
  BitVector folded(db.blocks.size());
  const auto& words = share.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t bits = words[w];
    while (bits != 0) {
      const std::size_t i = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
      folded.flip(db.layout[i]);
      bits &= bits - 1;
    }
  }
  return folded;
}

PirResponseShare eval_query(const PirDb& db, const BitVector& folded, EvalStats* stats) {
  if (folded.size() != db.blocks.size()) {
    throw ParameterError("folded query has " + std::to_string(folded.size()) + " bits, database has " +
                         std::to_string(db.blocks.size()) + " blocks");
  }
  PirResponseShare r;
  r.bytes.assign(db.max_block_size(), 0);
  std::uint8_t* out = r.bytes.data();
  for (std::size_t b = 0; b < db.blocks.size(); ++b) {
    const Bytes& block = db.blocks[b];
    // Branch-free selection: the same loads and stores run for either bit.
    const std::uint64_t mask = std::uint64_t{0} - static_cast<std::uint64_t>(folded.get(b));
    const std::size_t n = block.size();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
      std::uint64_t acc;
      std::uint64_t x;
      std::memcpy(&acc, out + i, 8);
      std::memcpy(&x, block.data() + i, 8);
      acc ^= x & mask;
      std::memcpy(out + i, &acc, 8);
    }
    for (; i < n; ++i) out[i] ^= static_cast<std::uint8_t>(block[i] & mask);
    if (stats) {
      ++stats->blocks_touched;
      stats->bytes_xored += n;
    }
  }
  return r;
}

Bytes combine(const PirResponseShare& r1, const PirResponseShare& r2) {
  if (r1.bytes.size() != r2.bytes.size()) {
    throw ParameterError("response shares differ in length: " + std::to_string(r1.bytes.size()) +
                         " vs " + std::to_string(r2.bytes.size()));
  }
  Bytes out(r1.bytes.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = r1.bytes[i] ^ r2.bytes[i];
  return out;
}

}  // namespace silmarillion::pir
