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
#include <utility>
#include <vector>

#include "silmarillion/core/bytes.hpp"
#include "silmarillion/core/rng.hpp"
#include "silmarillion/pir/pir_db.hpp"

namespace silmarillion::pir {

class BitVector {
 public:
  explicit BitVector(std::size_t bits = 0) : bits_(bits), words_((bits + 63) / 64, 0) {}

  static BitVector random(std::size_t bits, Rng& rng);

  std::size_t size() const { return bits_; }
  bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  void set(std::size_t i, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (i % 64);
    words_[i / 64] = v ? (words_[i / 64] | m) : (words_[i / 64] & ~m);
  }
  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }
  std::size_t popcount() const;

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  bool operator==(const BitVector&) const = default;

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

 private:
  std::size_t bits_;
  std::vector<std::uint64_t> words_;
};

using PirQueryShare = BitVector;

struct PirResponseShare {
  Bytes bytes;

  bool operator==(const PirResponseShare&) const = default;
};

// Share 1 is uniform; share 2 is share 1 with the target bit flipped.
std::pair<PirQueryShare, PirQueryShare> gen_query(std::uint32_t target, std::size_t domain_size,
                                                  Rng& rng);

// Bit per unique block: XOR of the share bits of every L-index mapped to it.
BitVector fold_query(const PirQueryShare& share, const PirDb& db);

struct EvalStats {
  std::size_t blocks_touched = 0;
  std::size_t bytes_xored = 0;
};

// XOR of the selected blocks into a zeroed buffer of max_block_size() bytes.
// Every block is read once whatever the query bits are.
PirResponseShare eval_query(const PirDb& db, const BitVector& folded, EvalStats* stats = nullptr);

Bytes combine(const PirResponseShare& r1, const PirResponseShare& r2);

}  // namespace silmarillion::pir
