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

#include "silmarillion/core/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <string_view>

#include "silmarillion/core/errors.hpp"

namespace silmarillion {

namespace {

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
struct PkeyDeleter {
  void operator()(EVP_PKEY* key) const { EVP_PKEY_free(key); }
};

using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;
using Pkey = std::unique_ptr<EVP_PKEY, PkeyDeleter>;

void check(int ok, const char* what) {
  if (ok != 1) throw Error(std::string("OpenSSL failure in ") + what);
}

Pkey ed25519_private(const std::array<std::uint8_t, 32>& seed) {
  Pkey key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(), seed.size()));
  if (!key) throw Error("cannot load Ed25519 private key");
  return key;
}

}  // namespace

Digest sha256(ByteSpan data) {
  Digest out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

struct Sha256::State {
  MdCtx ctx{EVP_MD_CTX_new()};
};

Sha256::Sha256() : state_(std::make_unique<State>()) {
  if (!state_->ctx) throw Error("EVP_MD_CTX_new failed");
  check(EVP_DigestInit_ex(state_->ctx.get(), EVP_sha256(), nullptr), "DigestInit");
}
Sha256::~Sha256() = default;
Sha256::Sha256(Sha256&&) noexcept = default;
Sha256& Sha256::operator=(Sha256&&) noexcept = default;

void Sha256::update(ByteSpan data) {
  check(EVP_DigestUpdate(state_->ctx.get(), data.data(), data.size()), "DigestUpdate");
}

Digest Sha256::finish() {
  Digest out;
  unsigned int len = 0;
  check(EVP_DigestFinal_ex(state_->ctx.get(), out.data(), &len), "DigestFinal");
  check(EVP_DigestInit_ex(state_->ctx.get(), EVP_sha256(), nullptr), "DigestInit");
  return out;
}

Digest hmac_sha256(ByteSpan key, ByteSpan data) {
  Digest out;
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(),
           out.data(), &len) == nullptr) {
    throw Error("HMAC-SHA256 failed");
  }
  return out;
}

Digest derive_key(std::string_view label, ByteSpan material) {
  Bytes msg(label.begin(), label.end());
  msg.push_back(0);
  msg.insert(msg.end(), material.begin(), material.end());
  return sha256(msg);
}

Bytes aead_seal(const AeadKey& key, const AeadNonce& nonce, ByteSpan aad, ByteSpan plaintext) {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw Error("EVP_CIPHER_CTX_new failed");
  check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()),
        "EncryptInit");
  int len = 0;
  if (!aad.empty()) {
    check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())),
          "EncryptUpdate(aad)");
  }
  Bytes out(kAeadNonceSize + plaintext.size() + kAeadTagSize);
  std::copy(nonce.begin(), nonce.end(), out.begin());
  std::uint8_t* ct = out.data() + kAeadNonceSize;
  if (!plaintext.empty()) {
    check(EVP_EncryptUpdate(ctx.get(), ct, &len, plaintext.data(),
                            static_cast<int>(plaintext.size())),
          "EncryptUpdate");
  }
  check(EVP_EncryptFinal_ex(ctx.get(), ct + plaintext.size(), &len), "EncryptFinal");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kAeadTagSize,
                            ct + plaintext.size()),
        "GET_TAG");
  return out;
}

std::optional<Bytes> aead_open(const AeadKey& key, ByteSpan aad, ByteSpan sealed) {
  if (sealed.size() < kAeadOverhead) return std::nullopt;
  const std::size_t ct_len = sealed.size() - kAeadOverhead;
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw Error("EVP_CIPHER_CTX_new failed");
  check(EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), sealed.data()),
        "DecryptInit");
  int len = 0;
  if (!aad.empty()) {
    check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())),
          "DecryptUpdate(aad)");
  }
  Bytes plain(ct_len);
  const std::uint8_t* ct = sealed.data() + kAeadNonceSize;
  if (ct_len > 0) {
    check(EVP_DecryptUpdate(ctx.get(), plain.data(), &len, ct, static_cast<int>(ct_len)),
          "DecryptUpdate");
  }
  Bytes tag(ct + ct_len, ct + ct_len + kAeadTagSize);
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kAeadTagSize, tag.data()),
        "SET_TAG");
  if (EVP_DecryptFinal_ex(ctx.get(), plain.data() + ct_len, &len) != 1) return std::nullopt;
  return plain;
}

SigningKey SigningKey::from_seed(const std::array<std::uint8_t, 32>& seed) {
  SigningKey key;
  key.seed_ = seed;
  Pkey pkey = ed25519_private(seed);
  std::size_t len = key.public_key_.size();
  check(EVP_PKEY_get_raw_public_key(pkey.get(), key.public_key_.data(), &len), "get_raw_public_key");
  return key;
}

SigningKey::SigningKey(const SigningKey&) = default;
SigningKey& SigningKey::operator=(const SigningKey&) = default;
SigningKey::~SigningKey() { OPENSSL_cleanse(seed_.data(), seed_.size()); }

Signature SigningKey::sign(ByteSpan message) const {
  Pkey pkey = ed25519_private(seed_);
  MdCtx ctx(EVP_MD_CTX_new());
  if (!ctx) throw Error("EVP_MD_CTX_new failed");
  check(EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()), "DigestSignInit");
  Signature sig;
  std::size_t len = sig.size();
  check(EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()), "DigestSign");
  return sig;
}

bool verify_signature(const PublicKey& key, ByteSpan message, const Signature& signature) {
  Pkey pkey(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, key.data(), key.size()));
  if (!pkey) return false;
  MdCtx ctx(EVP_MD_CTX_new());
  if (!ctx) throw Error("EVP_MD_CTX_new failed");
  if (EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) return false;
  return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(),
                          message.size()) == 1;
}

}  // namespace silmarillion
