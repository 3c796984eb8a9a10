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

#include "silmarillion/core/bytes.hpp"
#include "silmarillion/pir/pir_query.hpp"

namespace silmarillion::pir {

struct PirQueryMessage {
  std::uint32_t h_tile = 0;
  std::uint32_t payload_id = 0;
  PirQueryShare share;

  bool operator==(const PirQueryMessage&) const = default;
};

// h_tile(4) || payload_id(4) || share bits, bit i at byte i/8, position i%8.
Bytes serialize_query(const PirQueryMessage& msg);
// The domain is implied by the byte count; `domain_size` pins it exactly.
PirQueryMessage parse_query(ByteSpan bytes, std::size_t domain_size);
std::size_t serialized_query_size(std::size_t domain_size);

// length(4) || bytes.
Bytes serialize_response(const PirResponseShare& r);
PirResponseShare parse_response(ByteSpan bytes);

}  // namespace silmarillion::pir
