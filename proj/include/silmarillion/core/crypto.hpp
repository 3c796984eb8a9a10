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
#include <memory>
#include <optional>
#include <string_view>

#include "silmarillion/core/bytes.hpp"

namespace silmarillion {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(ByteSpan data);

// Incremental SHA-256, for digesting streamed chunks.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(Sha256&&) noexcept;
  Sha256& operator=(Sha256&&) noexcept;

  void update(ByteSpan data);
  Digest finish();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

Digest hmac_sha256(ByteSpan key, ByteSpan data);

// Domain-separated key derivation: SHA-256(label || 0x00 || material).
Digest derive_key(std::string_view label, ByteSpan material);

using AeadKey = std::array<std::uint8_t, 32>;
using AeadNonce = std::array<std::uint8_t, 12>;

// AES-256-GCM.  The sealed form is nonce(12) || ciphertext || tag(16).
inline constexpr std::size_t kAeadNonceSize = 12;
inline constexpr std::size_t kAeadTagSize = 16;
inline constexpr std::size_t kAeadOverhead = kAeadNonceSize + kAeadTagSize;

Bytes aead_seal(const AeadKey& key, const AeadNonce& nonce, ByteSpan aad, ByteSpan plaintext);
// Returns nullopt when the key, nonce, aad or any ciphertext bit is wrong.
std::optional<Bytes> aead_open(const AeadKey& key, ByteSpan aad, ByteSpan sealed);

inline constexpr std::size_t kSignatureSize = 64;
using Signature = std::array<std::uint8_t, kSignatureSize>;
using PublicKey = std::array<std::uint8_t, 32>;

// Ed25519 signing key; deterministic signatures, 32-byte public keys.
class SigningKey {
 public:
  static SigningKey from_seed(const std::array<std::uint8_t, 32>& seed);

  SigningKey(const SigningKey&);
  SigningKey& operator=(const SigningKey&);
  ~SigningKey();

  const PublicKey& public_key() const { return public_key_; }
  Signature sign(ByteSpan message) const;

 private:
  SigningKey() = default;

  std::array<std::uint8_t, 32> seed_{};
  PublicKey public_key_{};
};

bool verify_signature(const PublicKey& key, ByteSpan message, const Signature& signature);

}  // namespace silmarillion
