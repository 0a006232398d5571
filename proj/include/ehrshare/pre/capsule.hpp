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
#include "ehrshare/pre/keys.hpp"

namespace ehrshare::pre {

// KEM output. Wire layout (98 bytes):
//   [0, 33)   point_e           compressed
//   [33, 66)  point_v           compressed
//   [66, 98)  signature_scalar  big-endian
struct Capsule {
  static constexpr std::size_t kSize = 2 * kPointSize + kScalarSize;
  using Encoded = std::array<std::uint8_t, kSize>;

  Point point_e;
  Point point_v;
  Scalar signature_scalar;

  // s * G == V + H(E, V) * E. Needs no secret.
  bool verify() const;

  Encoded to_bytes() const;
  // Throws Error(Errc::decode) on bad length or invalid components. Does
  // not run verify().
  static Capsule from_bytes(ByteView bytes);

  friend bool operator==(const Capsule&, const Capsule&) = default;
};

struct Encapsulation {
  SymmetricKey key;
  Capsule capsule;
};

Encapsulation encapsulate(const PublicKey& recipient, EntropySource& entropy = system_entropy());
// Same, from an encoded key; a bad encoding is a validation error.
Encapsulation encapsulate(ByteView recipient_public_key, EntropySource& entropy = system_entropy());

// Owner-side opening. Throws Error(Errc::capsule) if the capsule fails its
// self-check; a wrong secret key yields a key that later fails the DEM.
SymmetricKey decapsulate_original(const SecretKey& owner, const Capsule& capsule);

}  // namespace ehrshare::pre
