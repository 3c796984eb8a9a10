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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "silmarillion/backend/registry.hpp"
#include "silmarillion/core/bytes.hpp"
#include "silmarillion/core/crypto.hpp"
#include "silmarillion/core/rng.hpp"
#include "silmarillion/core/wire.hpp"

namespace silmarillion::backend {

enum class UploadMode : std::uint8_t { kDelayed = 1, kEarly = 2, kSelective = 3 };

const char* to_string(UploadMode mode);
UploadMode upload_mode_from_string(const std::string& name);

// For delayed and selective uploads `certificate` holds the health
// authority's attestation.  Early uploads have no attestation yet; the field
// carries the 32-byte commitment to the escrow key instead.
struct UploadEnvelope {
  UploadMode mode = UploadMode::kDelayed;
  DeviceId dongle;
  Bytes certificate;
  Bytes ciphertext;

  bool operator==(const UploadEnvelope&) const = default;
};

// mode(1) || dongle_id(4) || cert_len(2) || cert || ct_len(4) || ciphertext.
Bytes serialize_envelope(const UploadEnvelope& env);
UploadEnvelope parse_envelope(ByteSpan bytes);

// Associated data binding the header fields to the ciphertext.
Bytes envelope_aad(UploadMode mode, DeviceId dongle, ByteSpan certificate);

// Delayed/selective key: shared dongle secret plus the session's OTP.
AeadKey upload_key(const SecretKey& dongle_key, const Otp& otp);
// Early key: OTP plus a dongle-held secret the backend sees only on release.
AeadKey early_key(const Otp& otp, const std::array<std::uint8_t, 32>& release_secret);
Digest key_commitment(const AeadKey& key);

Bytes encode_encounters(std::span<const EncounterRecord> records);
// Throws FormatError unless the length is a multiple of the record size.
std::vector<EncounterRecord> decode_encounters(ByteSpan bytes);

UploadEnvelope seal_upload(UploadMode mode, DeviceId dongle, const AeadKey& key,
                           std::span<const EncounterRecord> records, Bytes certificate, Rng& rng);
std::optional<std::vector<EncounterRecord>> open_upload(const UploadEnvelope& env, const AeadKey& key);

// Releases an escrowed early upload after a positive test.
struct KeyRelease {
  DeviceId dongle;
  std::uint16_t otp_index = 0;
  Otp otp{};
  AeadKey key{};
  Bytes certificate;
};

// Stand-in for a health authority's positive-test attestation:
// day(4) || HMAC-SHA256(authority key, "positive" || dongle_id || day).
class HealthAuthority {
 public:
  explicit HealthAuthority(Bytes key) : key_(std::move(key)) {}

  Bytes issue(DeviceId dongle, std::uint32_t day) const;
  bool check(ByteSpan certificate, DeviceId dongle) const;

 private:
  Bytes key_;
};

}  // namespace silmarillion::backend
