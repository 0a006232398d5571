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

#include "ehrshare/pre/fragments.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "ehrshare/common/error.hpp"
#include "ehrshare/pre/hash.hpp"

namespace ehrshare::pre {
namespace {

template <std::size_t N>
void append(Bytes& out, const std::array<std::uint8_t, N>& a) {
  out.insert(out.end(), a.begin(), a.end());
}

template <std::size_t N>
std::uint8_t* put(std::uint8_t* it, const std::array<std::uint8_t, N>& a) {
  return std::copy(a.begin(), a.end(), it);
}

// What the delegator signs for every kfrag, and what the delegatee checks
// again inside each cfrag proof.
Bytes kfrag_message(const FragmentId& id,
                    const Point& commitment,
                    const Point& precursor,
                    const PublicKey& delegator_pk,
                    const PublicKey& delegatee_pk) {
  Bytes msg;
  msg.reserve(kFragmentIdSize + 4 * kPointSize);
  append(msg, id);
  append(msg, commitment.to_bytes());
  append(msg, precursor.to_bytes());
  append(msg, delegator_pk.to_bytes());
  append(msg, delegatee_pk.to_bytes());
  return msg;
}

// Values both the delegator (from its ephemeral secret) and the delegatee
// (from its own secret) can compute: dh = x_a * pk_b = sk_b * precursor.
Scalar non_interactive_factor(const Point& precursor, const PublicKey& delegatee, const Point& dh) {
  return ScalarHasher(dst::kNonInteractive)
      .update(precursor)
      .update(delegatee.point())
      .update(dh)
      .finalize();
}

Scalar share_x(const Point& precursor,
               const PublicKey& delegatee,
               const Point& dh,
               const FragmentId& id) {
  return ScalarHasher(dst::kXCoordinate)
      .update(precursor)
      .update(delegatee.point())
      .update(dh)
      .update(id)
      .finalize();
}

Scalar proof_challenge(const Capsule& capsule,
                       const Point& e1,
                       const Point& e2,
                       const Point& v1,
                       const Point& v2,
                       const Point& u1,
                       const Point& u2) {
  return ScalarHasher(dst::kCfragProof)
      .update(capsule.point_e)
      .update(e1)
      .update(e2)
      .update(capsule.point_v)
      .update(v1)
      .update(v2)
      .update(commitment_base())
      .update(u1)
      .update(u2)
      .finalize();
}

Scalar eval_poly(const std::vector<Scalar>& coeffs, const Scalar& x) {
  Scalar acc = coeffs.back();
  for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Lagrange basis polynomial for xs[i], evaluated at zero.
Scalar lagrange_at_zero(const std::vector<Scalar>& xs, std::size_t i) {
  Scalar num = Scalar::from_u64(1);
  Scalar den = Scalar::from_u64(1);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (j == i) continue;
    num = num * xs[j];
    den = den * (xs[j] - xs[i]);
  }
  return num * den.inverse();
}

}  // namespace

KeyFragment::Encoded KeyFragment::to_bytes() const {
  Encoded out{};
  auto* it = put(out.data(), fragment_id);
  it = put(it, rekey_share.to_bytes());
  it = put(it, precursor.to_bytes());
  it = put(it, commitment.to_bytes());
  put(it, signature.to_bytes());
  return out;
}

KeyFragment KeyFragment::from_bytes(ByteView bytes) {
  if (bytes.size() != kSize) throw Error(Errc::decode, "kfrag: expected 194 bytes");
  FragmentId id{};
  std::copy_n(bytes.begin(), kFragmentIdSize, id.begin());
  std::size_t off = kFragmentIdSize;
  Scalar rk = Scalar::from_bytes(bytes.subspan(off, kScalarSize));
  off += kScalarSize;
  Point precursor = Point::from_bytes(bytes.subspan(off, kPointSize));
  off += kPointSize;
  Point commitment = Point::from_bytes(bytes.subspan(off, kPointSize));
  off += kPointSize;
  Signature sig = Signature::from_bytes(bytes.subspan(off, kSignatureSize));
  return KeyFragment{id, std::move(rk), std::move(precursor), std::move(commitment), sig};
}

CapsuleFragment::Encoded CapsuleFragment::to_bytes() const {
  Encoded out{};
  auto* it = put(out.data(), point_e1.to_bytes());
  it = put(it, point_v1.to_bytes());
  it = put(it, fragment_id);
  it = put(it, precursor.to_bytes());
  it = put(it, proof.point_e2.to_bytes());
  it = put(it, proof.point_v2.to_bytes());
  it = put(it, proof.kfrag_commitment.to_bytes());
  it = put(it, proof.kfrag_pok.to_bytes());
  it = put(it, proof.response.to_bytes());
  put(it, proof.kfrag_signature.to_bytes());
  return out;
}

CapsuleFragment CapsuleFragment::from_bytes(ByteView bytes) {
  if (bytes.size() != kSize) throw Error(Errc::decode, "cfrag: expected 359 bytes");
  std::size_t off = 0;
  auto next_point = [&] {
    Point p = Point::from_bytes(bytes.subspan(off, kPointSize));
    off += kPointSize;
    return p;
  };
  Point e1 = next_point();
  Point v1 = next_point();
  FragmentId id{};
  std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(off), kFragmentIdSize, id.begin());
  off += kFragmentIdSize;
  Point precursor = next_point();
  Point e2 = next_point();
  Point v2 = next_point();
  Point u1 = next_point();
  Point u2 = next_point();
  Scalar z3 = Scalar::from_bytes(bytes.subspan(off, kScalarSize));
  off += kScalarSize;
  Signature sig = Signature::from_bytes(bytes.subspan(off, kSignatureSize));
  return CapsuleFragment{
      std::move(e1),
      std::move(v1),
      id,
      std::move(precursor),
      CapsuleFragmentProof{std::move(e2), std::move(v2), std::move(u1), std::move(u2),
                           std::move(z3), sig},
  };
}

std::vector<KeyFragment> generate_kfrags(const KeyPair& delegator,
                                         const SigningKeyPair& delegator_signing,
                                         const PublicKey& delegatee,
                                         std::size_t threshold,
                                         std::size_t shares,
                                         EntropySource& entropy) {
  if (threshold == 0 || shares == 0 || threshold > shares) {
    throw Error(Errc::parameter, "kfrags: need 1 <= threshold (" + std::to_string(threshold) +
                                     ") <= shares (" + std::to_string(shares) + ")");
  }

  const Scalar ephemeral = Scalar::random(entropy);
  const Point precursor = Point::base_mul(ephemeral);
  const Point dh = delegatee.point() * ephemeral;
  const Scalar d = non_interactive_factor(precursor, delegatee, dh);

  std::vector<Scalar> coeffs;
  coeffs.reserve(threshold);
  coeffs.push_back(delegator.secret.scalar() * d.inverse());
  for (std::size_t i = 1; i < threshold; ++i) coeffs.push_back(Scalar::random(entropy));

  std::set<FragmentId> used;
  std::vector<KeyFragment> kfrags;
  kfrags.reserve(shares);
  while (kfrags.size() < shares) {
    FragmentId id{};
    entropy.fill(id);
    if (!used.insert(id).second) continue;

    Scalar rk = eval_poly(coeffs, share_x(precursor, delegatee, dh, id));
    Point commitment = commitment_base() * rk;
    Signature sig = delegator_signing.signing.sign(
        kfrag_message(id, commitment, precursor, delegator.public_key, delegatee));
    kfrags.push_back(KeyFragment{id, std::move(rk), precursor, std::move(commitment), sig});
  }
  return kfrags;
}

bool verify_kfrag(const KeyFragment& kfrag,
                  const VerifyingKey& delegator_vk,
                  const PublicKey& delegator_pk,
                  const PublicKey& delegatee_pk) {
  try {
    if (!(commitment_base() * kfrag.rekey_share == kfrag.commitment)) return false;
    return delegator_vk.verify(kfrag_message(kfrag.fragment_id, kfrag.commitment,
                                             kfrag.precursor, delegator_pk, delegatee_pk),
                               kfrag.signature);
  } catch (const Error&) {
    return false;
  }
}

CapsuleFragment reencapsulate(const KeyFragment& kfrag,
                              const Capsule& capsule,
                              EntropySource& entropy) {
  if (!capsule.verify()) throw Error(Errc::capsule, "capsule failed its self-check");
  const Scalar& rk = kfrag.rekey_share;
  Point e1 = capsule.point_e * rk;
  Point v1 = capsule.point_v * rk;

  const Scalar t = Scalar::random(entropy);
  Point e2 = capsule.point_e * t;
  Point v2 = capsule.point_v * t;
  Point u2 = commitment_base() * t;
  const Scalar h = proof_challenge(capsule, e1, e2, v1, v2, kfrag.commitment, u2);
  Scalar z3 = t + h * rk;

  return CapsuleFragment{
      std::move(e1),
      std::move(v1),
      kfrag.fragment_id,
      kfrag.precursor,
      CapsuleFragmentProof{std::move(e2), std::move(v2), kfrag.commitment, std::move(u2),
                           std::move(z3), kfrag.signature},
  };
}

bool verify_cfrag(const CapsuleFragment& cfrag,
                  const Capsule& capsule,
                  const VerifyingKey& delegator_vk,
                  const PublicKey& delegator_pk,
                  const PublicKey& delegatee_pk) {
  try {
    if (!capsule.verify()) return false;
    const auto& p = cfrag.proof;
    if (!delegator_vk.verify(kfrag_message(cfrag.fragment_id, p.kfrag_commitment,
                                           cfrag.precursor, delegator_pk, delegatee_pk),
                             p.kfrag_signature)) {
      return false;
    }
    const Scalar h = proof_challenge(capsule, cfrag.point_e1, p.point_e2, cfrag.point_v1,
                                     p.point_v2, p.kfrag_commitment, p.kfrag_pok);
    return capsule.point_e * p.response == p.point_e2 + cfrag.point_e1 * h &&
           capsule.point_v * p.response == p.point_v2 + cfrag.point_v1 * h &&
           commitment_base() * p.response == p.kfrag_pok + p.kfrag_commitment * h;
  } catch (const Error&) {
    return false;
  }
}

std::optional<VerifiedCapsuleFragment> verify_capsule_fragment(const CapsuleFragment& cfrag,
                                                               const Capsule& capsule,
                                                               const VerifyingKey& delegator_vk,
                                                               const PublicKey& delegator_pk,
                                                               const PublicKey& delegatee_pk) {
  if (!verify_cfrag(cfrag, capsule, delegator_vk, delegator_pk, delegatee_pk)) return std::nullopt;
  return VerifiedCapsuleFragment(cfrag, capsule, delegator_pk, delegatee_pk);
}

SymmetricKey decapsulate_reencrypted(const KeyPair& delegatee,
                                     const PublicKey& delegator_pk,
                                     const VerifyingKey& delegator_vk,
                                     const Capsule& capsule,
                                     std::span<const CapsuleFragment> cfrags) {
  if (!capsule.verify()) throw Error(Errc::capsule, "capsule failed its self-check");
  if (cfrags.empty()) throw Error(Errc::threshold, "no capsule fragments");

  std::vector<VerifiedCapsuleFragment> verified;
  verified.reserve(cfrags.size());
  for (std::size_t i = 0; i < cfrags.size(); ++i) {
    auto v = verify_capsule_fragment(cfrags[i], capsule, delegator_vk, delegator_pk, delegatee.public_key);
    if (!v) {
      throw FragmentVerificationError(i, "capsule fragment " + std::to_string(i) +
                                             " failed verification");
    }
    verified.push_back(std::move(*v));
  }
  return decapsulate_reencrypted(delegatee, delegator_pk, capsule, verified);
}

SymmetricKey decapsulate_reencrypted(const KeyPair& delegatee,
                                     const PublicKey& delegator_pk,
                                     const Capsule& capsule,
                                     std::span<const VerifiedCapsuleFragment> verified) {
  if (verified.empty()) throw Error(Errc::threshold, "no capsule fragments");
  std::vector<const CapsuleFragment*> cfrags;
  for (std::size_t i = 0; i < verified.size(); ++i) {
    const auto& v = verified[i];
    if (!(v.capsule() == capsule) || !(v.delegator() == delegator_pk) ||
        !(v.delegatee() == delegatee.public_key)) {
      throw FragmentVerificationError(
          i, "capsule fragment " + std::to_string(i) + " was verified for another capsule or key");
    }
    if (!(v.fragment().precursor == verified[0].fragment().precursor)) {
      throw FragmentVerificationError(
          i, "capsule fragment " + std::to_string(i) + " belongs to a different delegation");
    }
    cfrags.push_back(&v.fragment());
  }

  std::set<FragmentId> seen;
  std::vector<const CapsuleFragment*> distinct;
  for (const auto* cf : cfrags) {
    if (seen.insert(cf->fragment_id).second) distinct.push_back(cf);
  }

  const Point& precursor = cfrags[0]->precursor;
  const Point dh = precursor * delegatee.secret.scalar();
  const Scalar d = non_interactive_factor(precursor, delegatee.public_key, dh);

  std::vector<Scalar> xs;
  xs.reserve(distinct.size());
  for (const auto* cf : distinct) {
    xs.push_back(share_x(precursor, delegatee.public_key, dh, cf->fragment_id));
  }

  Point e_prime, v_prime;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    const Scalar lambda = lagrange_at_zero(xs, i);
    e_prime = e_prime + distinct[i]->point_e1 * lambda;
    v_prime = v_prime + distinct[i]->point_v1 * lambda;
  }

  // With enough shares (E', V') = (sk_a / d) * (E, V), which is exactly what
  // the capsule's own check equation predicts.
  const Scalar h = ScalarHasher(dst::kCapsuleCheck)
                       .update(capsule.point_e)
                       .update(capsule.point_v)
                       .finalize();
  if (!(delegator_pk.point() * (capsule.signature_scalar * d.inverse()) ==
        e_prime * h + v_prime)) {
    throw Error(Errc::threshold, "not enough distinct capsule fragments (" +
                                     std::to_string(distinct.size()) + " supplied)");
  }
  return derive_symmetric_key((e_prime + v_prime) * d);
}

}  // namespace ehrshare::pre
