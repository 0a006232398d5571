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

#pragma once

#include <array>
#include <cstdint>

#include "ehrshare/common/bytes.hpp"
#include "ehrshare/pre/curve.hpp"
#include "ehrshare/pre/entropy.hpp"

namespace ehrshare::pre {

class PublicKey {
 public:
  explicit PublicKey(Point point) : point_(std::move(point)) {}

  static PublicKey from_bytes(ByteView bytes) { return PublicKey(Point::from_bytes(bytes)); }
  PointBytes to_bytes() const { return point_.to_bytes(); }
  const Point& point() const { return point_; }

  friend bool operator==(const PublicKey&, const PublicKey&) = default;

 private:
  Point point_;
};

class SecretKey {
 public:
  // Throws Error(Errc::validation) for the zero scalar.
  explicit SecretKey(Scalar scalar);

  static SecretKey from_bytes(ByteView bytes);
  ScalarBytes to_bytes() const { return scalar_.to_bytes(); }
  const Scalar& scalar() const { return scalar_; }
  PublicKey public_key() const { return PublicKey(Point::base_mul(scalar_)); }

 private:
  Scalar scalar_;
};

struct KeyPair {
  SecretKey secret;
  PublicKey public_key;
};

// Secret draws of zero (or >= q) are discarded and redrawn.
KeyPair generate_keypair(EntropySource& entropy = system_entropy());

// Deterministic Schnorr signatures over the same group: the nonce is a
// hash of the signing key and message, signatures are (challenge, response).
inline constexpr std::size_t kSignatureSize = 64;

class Signature {
 public:
  using Bytes64 = std::array<std::uint8_t, kSignatureSize>;

  explicit Signature(const Bytes64& bytes) : bytes_(bytes) {}
  static Signature from_bytes(ByteView bytes);
  const Bytes64& to_bytes() const { return bytes_; }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  Bytes64 bytes_;
};

class VerifyingKey {
 public:
  explicit VerifyingKey(Point point) : point_(std::move(point)) {}

  static VerifyingKey from_bytes(ByteView bytes) { return VerifyingKey(Point::from_bytes(bytes)); }
  PointBytes to_bytes() const { return point_.to_bytes(); }
  const Point& point() const { return point_; }

  bool verify(ByteView message, const Signature& signature) const;

  friend bool operator==(const VerifyingKey&, const VerifyingKey&) = default;

 private:
  Point point_;
};

class SigningKey {
 public:
  explicit SigningKey(Scalar scalar);

  static SigningKey from_bytes(ByteView bytes);
  ScalarBytes to_bytes() const { return scalar_.to_bytes(); }
  VerifyingKey verifying_key() const { return VerifyingKey(Point::base_mul(scalar_)); }

  Signature sign(ByteView message) const;

 private:
  Scalar scalar_;
};

struct SigningKeyPair {
  SigningKey signing;
  VerifyingKey verifying;
};

SigningKeyPair generate_signing_keypair(EntropySource& entropy = system_entropy());

inline constexpr std::size_t kSymmetricKeySize = 32;

// DEM key. Only ever produced by the KEM's key derivation.
class SymmetricKey {
 public:
  using Bytes32 = std::array<std::uint8_t, kSymmetricKeySize>;

  explicit SymmetricKey(const Bytes32& bytes) : bytes_(bytes) {}
  SymmetricKey(const SymmetricKey&) = default;
  SymmetricKey& operator=(const SymmetricKey&) = default;
  ~SymmetricKey();

  const Bytes32& bytes() const { return bytes_; }

  friend bool operator==(const SymmetricKey& a, const SymmetricKey& b);

 private:
  Bytes32 bytes_;
};

// HKDF-SHA256 over the compressed encoding of the shared point.
SymmetricKey derive_symmetric_key(const Point& shared);

}  // namespace ehrshare::pre
