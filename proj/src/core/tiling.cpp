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

#include "silmarillion/core/tiling.hpp"

#include <cmath>
#include <string>

#include "silmarillion/core/errors.hpp"

namespace silmarillion {

namespace {

std::uint32_t mask(unsigned bits) {
  return bits >= 32 ? 0xffffffffu : ((std::uint32_t{1} << bits) - 1);
}

struct GridPoint {
  double x;
  double y;
};

// Splits an index of `bits` bits into (column, row) on a 2^ceil(bits/2) wide grid.
void split_grid(std::uint32_t index, unsigned bits, std::uint32_t& col, std::uint32_t& row) {
  unsigned col_bits = bits - bits / 2;
  col = index & mask(col_bits);
  row = index >> col_bits;
}

double grid_width(unsigned bits) { return std::ldexp(1.0, static_cast<int>(bits - bits / 2)); }
double grid_height(unsigned bits) { return std::ldexp(1.0, static_cast<int>(bits / 2)); }

GridPoint centroid(LocationId loc, const TilingParams& tiling) {
  TileCoords c = unpack_location(loc, tiling);
  std::uint32_t hc, hr, mc, mr, lc, lr;
  split_grid(c.h, tiling.h_bits, hc, hr);
  split_grid(c.m, tiling.m_bits, mc, mr);
  split_grid(c.l, tiling.l_bits, lc, lr);
  const double m_w = grid_width(tiling.l_bits);
  const double m_h = grid_height(tiling.l_bits);
  const double h_w = grid_width(tiling.m_bits) * m_w;
  const double h_h = grid_height(tiling.m_bits) * m_h;
  return {hc * h_w + mc * m_w + lc + 0.5, hr * h_h + mr * m_h + lr + 0.5};
}

}  // namespace

void TilingParams::validate() const {
  if (h_bits == 0 || m_bits == 0 || l_bits == 0 || h_bits + m_bits + l_bits != 32) {
    throw ParameterError("tile widths must be positive and sum to 32 (got " +
                         std::to_string(h_bits) + "/" + std::to_string(m_bits) + "/" +
                         std::to_string(l_bits) + ")");
  }
  if (m_bits + l_bits > 30) {
    throw ParameterError("PIR domain of 2^" + std::to_string(m_bits + l_bits) +
                         " L-tiles is too large");
  }
}

LocationId pack_location(std::uint32_t h, std::uint32_t m, std::uint32_t l,
                         const TilingParams& tiling) {
  if (h > mask(tiling.h_bits) || m > mask(tiling.m_bits) || l > mask(tiling.l_bits)) {
    throw RangeError("tile index out of range: (" + std::to_string(h) + ", " +
                     std::to_string(m) + ", " + std::to_string(l) + ")");
  }
  return LocationId{(h << (tiling.m_bits + tiling.l_bits)) | (m << tiling.l_bits) | l};
}

TileCoords unpack_location(LocationId loc, const TilingParams& tiling) {
  return {loc.packed >> (tiling.m_bits + tiling.l_bits),
          (loc.packed >> tiling.l_bits) & mask(tiling.m_bits), loc.packed & mask(tiling.l_bits)};
}

std::uint32_t h_tile_of(LocationId loc, const TilingParams& tiling) {
  return loc.packed >> (tiling.m_bits + tiling.l_bits);
}

std::uint32_t l_index_in_h_tile(LocationId loc, const TilingParams& tiling) {
  return loc.packed & mask(tiling.m_bits + tiling.l_bits);
}

LocationId location_from_h_index(std::uint32_t h_tile, std::uint32_t l_index,
                                 const TilingParams& tiling) {
  return pack_location(h_tile, l_index >> tiling.l_bits, l_index & mask(tiling.l_bits), tiling);
}

double tile_distance_km(LocationId a, LocationId b, const TilingParams& tiling) {
  GridPoint pa = centroid(a, tiling);
  GridPoint pb = centroid(b, tiling);
  return std::hypot(pa.x - pb.x, pa.y - pb.y);
}

}  // namespace silmarillion
