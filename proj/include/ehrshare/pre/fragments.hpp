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
#include <optional>
#include <span>
#include <vector>

#include "ehrshare/common/bytes.hpp"
#include "ehrshare/pre/capsule.hpp"
#include "ehrshare/pre/curve.hpp"
#include "ehrshare/pre/keys.hpp"

namespace ehrshare::pre {

inline constexpr std::size_t kFragmentIdSize = 32;
using FragmentId = std::array<std::uint8_t, kFragmentIdSize>;

// One Shamir share of the re-encryption key. Wire layout (194 bytes):
//   [0, 32)     fragment_id
//   [32, 64)    rekey_share
//   [64, 97)    precursor    ephemeral point shared by the whole set
//   [97, 130)   commitment   rekey_share * U
//   [130, 194)  signature    over id | commitment | precursor | pk_a | pk_b
struct KeyFragment {
  static constexpr std::size_t kSize =
      kFragmentIdSize + kScalarSize + 2 * kPointSize + kSignatureSize;
  using Encoded = std::array<std::uint8_t, kSize>;

  FragmentId fragment_id;
  Scalar rekey_share;
  Point precursor;
  Point commitment;
  Signature signature;

  Encoded to_bytes() const;
  static KeyFragment from_bytes(ByteView bytes);

  friend bool operator==(const KeyFragment&, const KeyFragment&) = default;
};

// Proof that (e1, v1) = rekey_share * (E, V) for the share committed to in
// the signed kfrag.
struct CapsuleFragmentProof {
  Point point_e2;
  Point point_v2;
  Point kfrag_commitment;
  Point kfrag_pok;
  Scalar response;
  Signature kfrag_signature;

  friend bool operator==(const CapsuleFragmentProof&, const CapsuleFragmentProof&) = default;
};

// Re-encapsulated capsule share. Wire layout (359 bytes):
//   [0, 33)     point_e1
//   [33, 66)    point_v1
//   [66, 98)    fragment_id
//   [98, 131)   precursor
//   [131, 164)  proof.point_e2
//   [164, 197)  proof.point_v2
//   [197, 230)  proof.kfrag_commitment
//   [230, 263)  proof.kfrag_pok
//   [263, 295)  proof.response
//   [295, 359)  proof.kfrag_signature
struct CapsuleFragment {
  static constexpr std::size_t kSize =
      7 * kPointSize + kFragmentIdSize + kScalarSize + kSignatureSize;
  using Encoded = std::array<std::uint8_t, kSize>;

  Point point_e1;
  Point point_v1;
  FragmentId fragment_id;
  Point precursor;
  CapsuleFragmentProof proof;

  Encoded to_bytes() const;
  static CapsuleFragment from_bytes(ByteView bytes);

  friend bool operator==(const CapsuleFragment&, const CapsuleFragment&) = default;
};

// Splits the delegator->delegatee re-encryption key into `shares` fragments,
// any `threshold` of which suffice. Only the delegatee's public key is
// needed. Throws Error(Errc::parameter) unless 1 <= threshold <= shares.
std::vector<KeyFragment> generate_kfrags(const KeyPair& delegator,
                                         const SigningKeyPair& delegator_signing,
                                         const PublicKey& delegatee,
                                         std::size_t threshold,
                                         std::size_t shares,
                                         EntropySource& entropy = system_entropy());

bool verify_kfrag(const KeyFragment& kfrag,
                  const VerifyingKey& delegator_vk,
                  const PublicKey& delegator_pk,
                  const PublicKey& delegatee_pk);

// Proxy-side transformation. Touches only the capsule. Throws
// Error(Errc::capsule) if the capsule fails its self-check.
CapsuleFragment reencapsulate(const KeyFragment& kfrag,
                              const Capsule& capsule,
                              EntropySource& entropy = system_entropy());

bool verify_cfrag(const CapsuleFragment& cfrag,
                  const Capsule& capsule,
                  const VerifyingKey& delegator_vk,
                  const PublicKey& delegator_pk,
                  const PublicKey& delegatee_pk);

// Delegatee-side opening. Every fragment is verified first; a bad one
// raises FragmentVerificationError naming its index. Fragments are
// deduplicated by id, and too few distinct ones raise Error(Errc::threshold).
SymmetricKey decapsulate_reencrypted(const KeyPair& delegatee,
                                     const PublicKey& delegator_pk,
                                     const VerifyingKey& delegator_vk,
                                     const Capsule& capsule,
                                     std::span<const CapsuleFragment> cfrags);

// A cfrag that passed verify_cfrag, bound to the capsule and key pair it
// was checked against. Only verify_capsule_fragment makes these.
class VerifiedCapsuleFragment {
 public:
  const CapsuleFragment& fragment() const { return cfrag_; }
  const Capsule& capsule() const { return capsule_; }
  const PublicKey& delegator() const { return delegator_; }
  const PublicKey& delegatee() const { return delegatee_; }

 private:
  VerifiedCapsuleFragment(CapsuleFragment cfrag, Capsule capsule, PublicKey delegator,
                          PublicKey delegatee)
      : cfrag_(std::move(cfrag)),
        capsule_(std::move(capsule)),
        delegator_(std::move(delegator)),
        delegatee_(std::move(delegatee)) {}

  friend std::optional<VerifiedCapsuleFragment> verify_capsule_fragment(const CapsuleFragment&,
                                                                        const Capsule&,
                                                                        const VerifyingKey&,
                                                                        const PublicKey&,
                                                                        const PublicKey&);

  CapsuleFragment cfrag_;
  Capsule capsule_;
  PublicKey delegator_;
  PublicKey delegatee_;
};

std::optional<VerifiedCapsuleFragment> verify_capsule_fragment(const CapsuleFragment& cfrag,
                                                               const Capsule& capsule,
                                                               const VerifyingKey& delegator_vk,
                                                               const PublicKey& delegator_pk,
                                                               const PublicKey& delegatee_pk);

// Opening from fragments verified up front; skips re-verification. A
// fragment verified for a different capsule or key pair raises
// FragmentVerificationError.
SymmetricKey decapsulate_reencrypted(const KeyPair& delegatee,
                                     const PublicKey& delegator_pk,
                                     const Capsule& capsule,
                                     std::span<const VerifiedCapsuleFragment> cfrags);

}  // namespace ehrshare::pre
