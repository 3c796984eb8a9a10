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

#include <compare>
#include <cstdint>
#include <functional>

namespace silmarillion {

// Bit widths of the three tile levels inside a 32-bit location id.
struct TilingParams {
  unsigned h_bits = 11;
  unsigned m_bits = 7;
  unsigned l_bits = 14;

  // Throws ParameterError unless the widths are positive and sum to 32.
  void validate() const;

  // Number of L-tiles under one H-tile, i.e. the PIR query domain.
  std::uint32_t domain_size() const { return std::uint32_t{1} << (m_bits + l_bits); }
  std::uint32_t l_tiles_per_m_tile() const { return std::uint32_t{1} << l_bits; }
  std::uint32_t m_tiles_per_h_tile() const { return std::uint32_t{1} << m_bits; }

  bool operator==(const TilingParams&) const = default;
};

// Hierarchical tile identifier: h in the top bits, then m, then l.
struct LocationId {
  std::uint32_t packed = 0;
  auto operator<=>(const LocationId&) const = default;
};

struct TileCoords {
  std::uint32_t h = 0;
  std::uint32_t m = 0;
  std::uint32_t l = 0;
  bool operator==(const TileCoords&) const = default;
};

// Throws RangeError when a field does not fit its width.
LocationId pack_location(std::uint32_t h, std::uint32_t m, std::uint32_t l,
                         const TilingParams& tiling = {});
TileCoords unpack_location(LocationId loc, const TilingParams& tiling = {});

std::uint32_t h_tile_of(LocationId loc, const TilingParams& tiling = {});
// Index of the L-tile inside its H-tile: (m << l_bits) | l.
std::uint32_t l_index_in_h_tile(LocationId loc, const TilingParams& tiling = {});
LocationId location_from_h_index(std::uint32_t h_tile, std::uint32_t l_index,
                                 const TilingParams& tiling = {});

// Tiles are laid out on an abstract plane: 1 km L-tiles on a square-ish
// grid inside each M-tile, M-tiles on a grid inside each H-tile, H-tiles on
// a global grid.  Returns the distance between tile centroids in km.
double tile_distance_km(LocationId a, LocationId b, const TilingParams& tiling = {});

}  // namespace silmarillion

template <>
struct std::hash<silmarillion::LocationId> {
  std::size_t operator()(const silmarillion::LocationId& loc) const noexcept {
    return std::hash<std::uint32_t>{}(loc.packed);
  }
};
