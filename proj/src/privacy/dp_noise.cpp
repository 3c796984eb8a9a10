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

#include "silmarillion/privacy/dp_noise.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "silmarillion/core/errors.hpp"

namespace silmarillion::privacy {

namespace {

// Untruncated Laplace CDF at -t, i.e. the mass cut away.
double lower_mass(const DpParams& p) { return 0.5 * std::exp(-static_cast<double>(p.t) / p.lambda); }

}  // namespace

DpParams dp_params(double epsilon, double delta, std::uint32_t sensitivity) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    throw ParameterError("epsilon must be positive and finite, got " + std::to_string(epsilon));
  }
  if (!(delta > 0 && delta < 1)) {
    throw ParameterError("delta must lie in (0, 1), got " + std::to_string(delta));
  }
  if (sensitivity < 1) throw ParameterError("sensitivity must be at least 1");

  DpParams p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.sensitivity = sensitivity;
  p.lambda = sensitivity / epsilon;
  // ln(e^eps - 1 + delta) rewritten so large epsilon does not overflow.
  const double a = sensitivity / p.lambda;
  const double log_num = a + std::log1p(-(1 - delta) * std::exp(-a));
  const double t = std::ceil(p.lambda * (log_num - std::log(2 * delta)));
  p.t = t > 0 ? static_cast<std::uint64_t>(t) : 0;
  return p;
}

double truncated_laplace_cdf(const DpParams& params, double x) {
  const double lo = -static_cast<double>(params.t);
  if (x < lo) return 0;
  const double f0 = lower_mass(params);
  // 1 - F(x) for the untruncated law, divided by the retained mass.
  if (x >= 0) return 1 - 0.5 * std::exp(-x / params.lambda) / (1 - f0);
  return (0.5 * std::exp(x / params.lambda) - f0) / (1 - f0);
}

double truncated_laplace_quantile(const DpParams& params, double p) {
  if (!(p >= 0 && p < 1)) throw ParameterError("quantile level must lie in [0, 1)");
  const double f0 = lower_mass(params);
  const double u = f0 + (1 - f0) * p;
  if (u < 0.5) return params.lambda * std::log(2 * u);
  return -params.lambda * std::log(2 * (1 - f0) * (1 - p));
}

double sample_truncated_laplace(const DpParams& params, Rng& rng) {
  const double v = rng.uniform01();
  const double f0 = lower_mass(params);
  const double u = f0 + (1 - f0) * v;
  double x;
  if (u < 0.5) {
    x = params.lambda * std::log(2 * u);
  } else {
    // 1 - u = (1 - f0)(1 - v), evaluated without cancellation.
    x = -params.lambda * std::log(2 * (1 - f0) * (1 - v));
  }
  const double lo = -static_cast<double>(params.t);
  return x < lo ? lo : x;
}

std::uint64_t sample_junk_count(const DpParams& params, Rng& rng) {
  const double n = static_cast<double>(params.t) + std::floor(sample_truncated_laplace(params, rng));
  return n <= 0 ? 0 : static_cast<std::uint64_t>(n);
}

double junk_count_cdf(const DpParams& params, std::int64_t n) {
  // floor(x) <= n - t  <=>  x < n - t + 1.
  return truncated_laplace_cdf(params, static_cast<double>(n - static_cast<std::int64_t>(params.t) + 1));
}

std::uint64_t junk_count_quantile(const DpParams& params, double p) {
  const double q = truncated_laplace_quantile(params, p);
  auto n = static_cast<std::int64_t>(params.t) + static_cast<std::int64_t>(std::floor(q));
  if (n < 0) n = 0;
  // Settle rounding at the boundary against the exact CDF.
  while (n > 0 && junk_count_cdf(params, n - 1) >= p) --n;
  while (junk_count_cdf(params, n) < p) ++n;
  return static_cast<std::uint64_t>(n);
}

std::vector<EphemeralId> generate_junk_ids(std::size_t n, Rng& rng) {
  std::vector<EphemeralId> ids(n);
  for (EphemeralId& id : ids) rng.fill(id.bytes);
  return ids;
}

}  // namespace silmarillion::privacy
