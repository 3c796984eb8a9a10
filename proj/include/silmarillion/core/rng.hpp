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
#include <limits>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace silmarillion {

// Deterministic random stream.  Child streams are derived from the seed and a
// label, never from the parent's current state, so adding a consumer never
// perturbs the draws of another.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  Rng derive(std::string_view label) const;
  Rng derive(std::string_view label, std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 bits of precision.
  double uniform01();
  // Uniform on [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p);
  void fill(std::span<std::uint8_t> out);

  // Fisher-Yates with this generator, so results do not depend on the
  // standard library's shuffle.
  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace silmarillion
