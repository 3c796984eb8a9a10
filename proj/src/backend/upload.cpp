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

#include "silmarillion/backend/upload.hpp"

#include <string>

#include "silmarillion/core/errors.hpp"

namespace silmarillion::backend {

const char* to_string(UploadMode mode) {
  switch (mode) {
    case UploadMode::kDelayed:
      return "delayed";
    case UploadMode::kEarly:
      return "early";
    case UploadMode::kSelective:
      return "selective";
  }
  return "unknown";
}

UploadMode upload_mode_from_string(const std::string& name) {
  if (name == "delayed") return UploadMode::kDelayed;
  if (name == "early") return UploadMode::kEarly;
  if (name == "selective") return UploadMode::kSelective;
  throw ParameterError("unknown upload mode '" + name + "'");
}

Bytes serialize_envelope(const UploadEnvelope& env) {
  if (env.certificate.size() > 0xffff) throw ParameterError("certificate too long");
  Bytes out;
  ByteWriter w(out);
  w.u8(static_cast<std::uint8_t>(env.mode));
  w.u32(env.dongle.value);
  w.u16(static_cast<std::uint16_t>(env.certificate.size()));
  w.bytes(env.certificate);
  w.u32(static_cast<std::uint32_t>(env.ciphertext.size()));
  w.bytes(env.ciphertext);
  return out;
}

UploadEnvelope parse_envelope(ByteSpan bytes) {
  ByteReader r(bytes);
  UploadEnvelope env;
  const std::uint8_t mode = r.u8();
  if (mode < 1 || mode > 3) throw FormatError("unknown upload mode " + std::to_string(mode));
  env.mode = static_cast<UploadMode>(mode);
  env.dongle.value = r.u32();
  ByteSpan cert = r.bytes(r.u16());
  env.certificate.assign(cert.begin(), cert.end());
  ByteSpan ct = r.bytes(r.u32());
  env.ciphertext.assign(ct.begin(), ct.end());
  if (r.remaining() != 0) throw FormatError("trailing bytes after upload envelope");
  return env;
}

Bytes envelope_aad(UploadMode mode, DeviceId dongle, ByteSpan certificate) {
  Bytes aad;
  ByteWriter w(aad);
  w.u8(static_cast<std::uint8_t>(mode));
  w.u32(dongle.value);
  w.bytes(certificate);
  return aad;
}

AeadKey upload_key(const SecretKey& dongle_key, const Otp& otp) {
  Bytes material(dongle_key.bytes.begin(), dongle_key.bytes.end());
  material.insert(material.end(), otp.begin(), otp.end());
  return derive_key("upload", material);
}

AeadKey early_key(const Otp& otp, const std::array<std::uint8_t, 32>& release_secret) {
  Bytes material(otp.begin(), otp.end());
  material.insert(material.end(), release_secret.begin(), release_secret.end());
  return derive_key("early", material);
}

Digest key_commitment(const AeadKey& key) { return derive_key("commit", key); }

Bytes encode_encounters(std::span<const EncounterRecord> records) {
  Bytes out;
  out.reserve(records.size() * kEncounterSize);
  for (const EncounterRecord& r : records) append_encounter(out, r);
  return out;
}

std::vector<EncounterRecord> decode_encounters(ByteSpan bytes) {
  if (bytes.size() % kEncounterSize != 0) {
    throw FormatError("encounter list of " + std::to_string(bytes.size()) + " bytes");
  }
  std::vector<EncounterRecord> out;
  out.reserve(bytes.size() / kEncounterSize);
  for (std::size_t i = 0; i < bytes.size(); i += kEncounterSize) {
    out.push_back(parse_encounter(bytes.subspan(i, kEncounterSize)));
  }
  return out;
}

UploadEnvelope seal_upload(UploadMode mode, DeviceId dongle, const AeadKey& key,
                           std::span<const EncounterRecord> records, Bytes certificate, Rng& rng) {
  UploadEnvelope env;
  env.mode = mode;
  env.dongle = dongle;
  env.certificate = std::move(certificate);
  AeadNonce nonce;
  rng.fill(nonce);
  env.ciphertext = aead_seal(key, nonce, envelope_aad(mode, dongle, env.certificate),
                             encode_encounters(records));
  return env;
}

std::optional<std::vector<EncounterRecord>> open_upload(const UploadEnvelope& env, const AeadKey& key) {
  auto plain = aead_open(key, envelope_aad(env.mode, env.dongle, env.certificate), env.ciphertext);
  if (!plain) return std::nullopt;
  try {
    return decode_encounters(*plain);
  } catch (const FormatError&) {
    return std::nullopt;
  }
}

Bytes HealthAuthority::issue(DeviceId dongle, std::uint32_t day) const {
  Bytes msg{'p', 'o', 's', 'i', 't', 'i', 'v', 'e'};
  ByteWriter w(msg);
  w.u32(dongle.value);
  w.u32(day);
  Bytes cert;
  ByteWriter c(cert);
  c.u32(day);
  c.bytes(hmac_sha256(key_, msg));
  return cert;
}

bool HealthAuthority::check(ByteSpan certificate, DeviceId dongle) const {
  if (certificate.size() != 36) return false;
  const std::uint32_t day = load_be32(certificate.data());
  const Bytes expect = issue(dongle, day);
  // Constant-time comparison of the MAC.
  std::uint8_t diff = 0;
  for (std::size_t i = 0; i < expect.size(); ++i) diff |= expect[i] ^ certificate[i];
  return diff == 0;
}

}  // namespace silmarillion::backend
