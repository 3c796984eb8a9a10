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
#include <vector>

#include "silmarillion/core/rng.hpp"
#include "silmarillion/core/types.hpp"

namespace silmarillion::privacy {

inline constexpr std::uint32_t kDefaultSensitivity = 2016;

struct DpParams {
  double epsilon = 0;
  double delta = 0;
  std::uint32_t sensitivity = kDefaultSensitivity;
  double lambda = 0;   // Laplace scale, sensitivity / epsilon
  std::uint64_t t = 0;  // truncation offset

  bool operator==(const DpParams&) const = default;
};

// lambda = A / epsilon and
// t = ceil(lambda * ln((e^(A/lambda) - 1 + delta) / (2 delta))), floored at 0.
DpParams dp_params(double epsilon, double delta, std::uint32_t sensitivity = kDefaultSensitivity);

// Laplace(0, lambda) conditioned on x >= -t.
double truncated_laplace_cdf(const DpParams& params, double x);
double truncated_laplace_quantile(const DpParams& params, double p);
double sample_truncated_laplace(const DpParams& params, Rng& rng);

// N = t + floor(x), x ~ truncated Laplace.  Always non-negative.
std::uint64_t sample_junk_count(const DpParams& params, Rng& rng);
// Smallest n with Pr[N <= n] >= p.
std::uint64_t junk_count_quantile(const DpParams& params, double p);
// Pr[N <= n].
double junk_count_cdf(const DpParams& params, std::int64_t n);

// n ids uniform over the 15-byte space.
std::vector<EphemeralId> generate_junk_ids(std::size_t n, Rng& rng);

}  // namespace silmarillion::privacy
