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
#include <cstddef>
#include <cstdint>

#include "ehrshare/common/bytes.hpp"
#include "ehrshare/pre/capsule.hpp"
#include "ehrshare/pre/keys.hpp"

namespace ehrshare::pre {

// ChaCha20-Poly1305 (RFC 8439) with the encoded capsule as associated data.
inline constexpr std::size_t kNonceSize = 12;
inline constexpr std::size_t kTagSize = 16;
inline constexpr std::size_t kDefaultMaxPlaintext = std::size_t{64} << 20;

struct Ciphertext {
  std::array<std::uint8_t, kNonceSize> nonce{};
  Bytes body;             // sealed bytes followed by the 16-byte tag
  Bytes associated_data;  // encoded capsule

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

// Throws Error(Errc::size) if plaintext exceeds max_plaintext.
Ciphertext dem_encrypt(const SymmetricKey& key,
                       ByteView plaintext,
                       const Capsule& capsule,
                       EntropySource& entropy = system_entropy(),
                       std::size_t max_plaintext = kDefaultMaxPlaintext);

// Throws Error(Errc::decryption) on any authentication failure.
Bytes dem_decrypt(const SymmetricKey& key, const Ciphertext& ciphertext);

}  // namespace ehrshare::pre
