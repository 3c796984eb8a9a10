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

#include "silmarillion/core/rng.hpp"

#include <string>

#include "silmarillion/core/bytes.hpp"
#include "silmarillion/core/crypto.hpp"
#include "silmarillion/core/errors.hpp"

namespace silmarillion {

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

Rng Rng::derive(std::string_view label) const {
  Bytes msg;
  ByteWriter w(msg);
  w.u64(seed_);
  w.bytes(ByteSpan(reinterpret_cast<const std::uint8_t*>(label.data()), label.size()));
  Digest d = sha256(msg);
  return Rng(load_be64(d.data()));
}

Rng Rng::derive(std::string_view label, std::uint64_t index) const {
  std::string full(label);
  full.push_back('#');
  full += std::to_string(index);
  return derive(full);
}

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("Rng::below requires a positive bound");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = max() - (max() % bound + 1) % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x > limit);
  return x % bound;
}

bool Rng::bernoulli(double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return uniform01() < p;
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t x = engine_();
    for (int k = 0; k < 8 && i < out.size(); ++k, ++i) {
      out[i] = static_cast<std::uint8_t>(x >> (8 * k));
    }
  }
}

}  // namespace silmarillion
