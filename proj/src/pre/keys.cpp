// Copyright 2026 The ehrshare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ehrshare/pre/keys.hpp"

#include <openssl/core_names.h>
#include <openssl/crypto.h>
#include <openssl/kdf.h>
#include <openssl/params.h>

#include <algorithm>

#include "ehrshare/common/error.hpp"
#include "ehrshare/pre/hash.hpp"

namespace ehrshare::pre {
namespace {

constexpr std::string_view kKdfInfo = "ehrshare/kem/v1";

Scalar nonzero(Scalar s, const char* what) {
  if (s.is_zero()) throw Error(Errc::validation, what);
  return s;
}

}  // namespace

SecretKey::SecretKey(Scalar scalar) : scalar_(nonzero(std::move(scalar), "secret key is zero")) {}

SecretKey SecretKey::from_bytes(ByteView bytes) { return SecretKey(Scalar::from_bytes(bytes)); }

KeyPair generate_keypair(EntropySource& entropy) {
  SecretKey secret(Scalar::random(entropy));
  PublicKey pub = secret.public_key();
  return KeyPair{std::move(secret), std::move(pub)};
}

Signature Signature::from_bytes(ByteView bytes) {
  if (bytes.size() != kSignatureSize) throw Error(Errc::decode, "signature: expected 64 bytes");
  Bytes64 b{};
  std::copy(bytes.begin(), bytes.end(), b.begin());
  return Signature(b);
}

SigningKey::SigningKey(Scalar scalar)
    : scalar_(nonzero(std::move(scalar), "signing key is zero")) {}

SigningKey SigningKey::from_bytes(ByteView bytes) { return SigningKey(Scalar::from_bytes(bytes)); }

Signature SigningKey::sign(ByteView message) const {
  const Point pub = Point::base_mul(scalar_);
  const Scalar nonce =
      ScalarHasher(dst::kSignatureNonce).update(scalar_).update(pub).update(message).finalize();
  if (nonce.is_zero()) throw Error(Errc::internal, "degenerate signature nonce");
  const Point commitment = Point::base_mul(nonce);
  const Scalar challenge = ScalarHasher(dst::kSignatureChallenge)
                               .update(commitment)
                               .update(pub)
                               .update(message)
                               .finalize();
  const Scalar response = nonce + challenge * scalar_;

  Signature::Bytes64 out{};
  const auto c = challenge.to_bytes();
  const auto r = response.to_bytes();
  std::copy(c.begin(), c.end(), out.begin());
  std::copy(r.begin(), r.end(), out.begin() + kScalarSize);
  return Signature(out);
}

bool VerifyingKey::verify(ByteView message, const Signature& signature) const {
  const auto& raw = signature.to_bytes();
  Scalar challenge, response;
  try {
    challenge = Scalar::from_bytes(ByteView(raw).first(kScalarSize));
    response = Scalar::from_bytes(ByteView(raw).subspan(kScalarSize));
  } catch (const Error&) {
    return false;
  }
  const Point commitment = Point::base_mul(response) - point_ * challenge;
  if (commitment.is_infinity()) return false;
  const Scalar expected = ScalarHasher(dst::kSignatureChallenge)
                              .update(commitment)
                              .update(point_)
                              .update(message)
                              .finalize();
  return expected == challenge;
}

SigningKeyPair generate_signing_keypair(EntropySource& entropy) {
  SigningKey signing(Scalar::random(entropy));
  VerifyingKey verifying = signing.verifying_key();
  return SigningKeyPair{std::move(signing), std::move(verifying)};
}

SymmetricKey::~SymmetricKey() { OPENSSL_cleanse(bytes_.data(), bytes_.size()); }

bool operator==(const SymmetricKey& a, const SymmetricKey& b) {
  return CRYPTO_memcmp(a.bytes_.data(), b.bytes_.data(), a.bytes_.size()) == 0;
}

SymmetricKey derive_symmetric_key(const Point& shared) {
  auto ikm = shared.to_bytes();

  struct KdfDeleter {
    void operator()(EVP_KDF* k) const noexcept { EVP_KDF_free(k); }
    void operator()(EVP_KDF_CTX* c) const noexcept { EVP_KDF_CTX_free(c); }
  };
  static EVP_KDF* const hkdf = EVP_KDF_fetch(nullptr, OSSL_KDF_NAME_HKDF, nullptr);
  if (hkdf == nullptr) throw Error(Errc::internal, "HKDF unavailable");
  std::unique_ptr<EVP_KDF_CTX, KdfDeleter> ctx(EVP_KDF_CTX_new(hkdf));
  if (!ctx) throw std::bad_alloc();

  char digest[] = "SHA256";
  std::string info(kKdfInfo);
  OSSL_PARAM params[] = {
      OSSL_PARAM_construct_utf8_string(OSSL_KDF_PARAM_DIGEST, digest, 0),
      OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_KEY, ikm.data(), ikm.size()),
      OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_INFO, info.data(), info.size()),
      OSSL_PARAM_construct_end(),
  };
  SymmetricKey::Bytes32 okm{};
  const int rc = EVP_KDF_derive(ctx.get(), okm.data(), okm.size(), params);
  OPENSSL_cleanse(ikm.data(), ikm.size());
  if (rc != 1) throw Error(Errc::internal, "HKDF derive failed");
  SymmetricKey key(okm);
  OPENSSL_cleanse(okm.data(), okm.size());
  return key;
}

}  // namespace ehrshare::pre
