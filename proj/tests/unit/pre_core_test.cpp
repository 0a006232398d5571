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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <type_traits>

#include "ehrshare/common/error.hpp"
#include "ehrshare/pre/pre.hpp"
#include "test_entropy.hpp"

namespace ehrshare::pre {
namespace {

using ehrshare::testing::FailingEntropy;
using ehrshare::testing::SeededEntropy;
using ehrshare::testing::ZeroFirstEntropy;

Bytes random_bytes(std::size_t n, std::uint64_t seed) {
  Bytes out(n);
  std::mt19937_64 rng(seed);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

template <std::size_t N>
std::array<std::uint8_t, N> flip(std::array<std::uint8_t, N> a, std::size_t pos,
                                 std::uint8_t mask) {
  a[pos] ^= mask;
  return a;
}

constexpr std::uint8_t kMasks[] = {0x01, 0x80, 0xff};

// Fixture: Alice delegates to Bob.
struct Parties {
  KeyPair alice = generate_keypair();
  SigningKeyPair alice_signing = generate_signing_keypair();
  KeyPair bob = generate_keypair();
};

TEST(Curve, GeneratorMatchesStandardEncoding) {
  EXPECT_EQ(hex_encode(Point::generator().to_bytes()),
            "0279be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798");
  EXPECT_EQ(hex_encode(Point::base_mul(Scalar::from_u64(2)).to_bytes()),
            "02c6047f9441ed7d6d3045406e95c07cd85c778e4b8cef3ca7abac09b95c709ee5");
}

TEST(Curve, ScalarRejectsOrderAndAbove) {
  const Bytes order = hex_decode("fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141");
  EXPECT_THROW(Scalar::from_bytes(order), Error);
  Bytes below = order;
  below.back() -= 1;
  EXPECT_NO_THROW(Scalar::from_bytes(below));
  EXPECT_TRUE(Scalar::from_bytes_reduced(order).is_zero());
}

TEST(Curve, ScalarFieldIdentities) {
  SeededEntropy rng(7);
  for (int i = 0; i < 20; ++i) {
    const Scalar a = Scalar::random(rng);
    const Scalar b = Scalar::random(rng);
    EXPECT_EQ(a * a.inverse(), Scalar::from_u64(1));
    EXPECT_EQ((a + b) - b, a);
    EXPECT_EQ(a + (-a), Scalar());
    // (a + b) G == aG + bG
    EXPECT_EQ(Point::base_mul(a + b), Point::base_mul(a) + Point::base_mul(b));
    EXPECT_EQ(Point::base_mul(a * b), Point::base_mul(a) * b);
  }
}

TEST(Curve, CommitmentBaseIsFixedAndNotGenerator) {
  EXPECT_EQ(commitment_base(), Point::hash_to_point(dst::kCommitmentBase, {}));
  EXPECT_FALSE(commitment_base() == Point::generator());
}

TEST(Keys, PublicIsSecretTimesGenerator) {
  SeededEntropy rng(42);
  const KeyPair kp = generate_keypair(rng);
  EXPECT_EQ(kp.public_key.point(), Point::generator() * kp.secret.scalar());
}

TEST(Keys, SeededGenerationIsReproducible) {
  SeededEntropy a(1), b(1);
  EXPECT_EQ(generate_keypair(a).public_key, generate_keypair(b).public_key);
}

TEST(Keys, IndependentCallsDiffer) {
  const KeyPair a = generate_keypair();
  const KeyPair b = generate_keypair();
  EXPECT_FALSE(a.secret.scalar() == b.secret.scalar());
}

TEST(Keys, ZeroDrawIsRejectedAndRedrawn) {
  ZeroFirstEntropy stub(kScalarSize);
  const KeyPair kp = generate_keypair(stub);
  EXPECT_EQ(stub.remaining(), 0u);
  EXPECT_FALSE(kp.secret.scalar().is_zero());
  EXPECT_EQ(kp.public_key, kp.secret.public_key());
}

TEST(Keys, EntropyFailureIsFatal) {
  FailingEntropy broken;
  try {
    generate_keypair(broken);
    FAIL() << "expected entropy error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::entropy);
  }
  EXPECT_THROW(generate_signing_keypair(broken), Error);
}

TEST(Keys, ZeroSecretKeyEncodingRejected) {
  const Bytes zero(kScalarSize, 0);
  try {
    SecretKey::from_bytes(zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::validation);
  }
}

TEST(Signature, EmptyMessageRoundTrip) {
  const auto kp = generate_signing_keypair();
  EXPECT_TRUE(kp.verifying.verify({}, kp.signing.sign({})));
}

TEST(Signature, DeterministicPerKeyAndMessage) {
  const auto kp = generate_signing_keypair();
  const Bytes msg = random_bytes(100, 3);
  EXPECT_EQ(kp.signing.sign(msg), kp.signing.sign(msg));
}

TEST(Signature, OtherVerifyingKeyRejects) {
  const auto kp = generate_signing_keypair();
  const auto other = generate_signing_keypair();
  const Bytes msg = random_bytes(64, 4);
  EXPECT_FALSE(other.verifying.verify(msg, kp.signing.sign(msg)));
}

TEST(Signature, EveryFlippedSignatureByteRejects) {
  const auto kp = generate_signing_keypair();
  const Bytes msg = random_bytes(64, 5);
  const auto sig = kp.signing.sign(msg).to_bytes();
  for (std::size_t pos = 0; pos < sig.size(); ++pos) {
    for (auto mask : kMasks) {
      EXPECT_FALSE(kp.verifying.verify(msg, Signature(flip(sig, pos, mask))))
          << "pos " << pos << " mask " << int(mask);
    }
  }
}

TEST(Signature, FlippedMessageRejects) {
  const auto kp = generate_signing_keypair();
  Bytes msg = random_bytes(32, 6);
  const auto sig = kp.signing.sign(msg);
  msg[10] ^= 1;
  EXPECT_FALSE(kp.verifying.verify(msg, sig));
}

TEST(Kem, RoundTrip) {
  const KeyPair a = generate_keypair();
  const auto enc = encapsulate(a.public_key);
  EXPECT_TRUE(enc.capsule.verify());
  EXPECT_EQ(decapsulate_original(a.secret, enc.capsule), enc.key);
}

TEST(Kem, CapsuleCodecRoundTrip) {
  const auto enc = encapsulate(generate_keypair().public_key);
  const auto bytes = enc.capsule.to_bytes();
  ASSERT_EQ(bytes.size(), 98u);
  const Capsule back = Capsule::from_bytes(bytes);
  EXPECT_EQ(back, enc.capsule);
  EXPECT_EQ(back.to_bytes(), bytes);
}

TEST(Kem, EverySingleByteCapsuleCorruptionFailsSelfCheck) {
  const auto enc = encapsulate(generate_keypair().public_key);
  const auto bytes = enc.capsule.to_bytes();
  for (std::size_t pos = 0; pos < bytes.size(); ++pos) {
    for (auto mask : kMasks) {
      const auto bad = flip(bytes, pos, mask);
      bool rejected = false;
      try {
        rejected = !Capsule::from_bytes(bad).verify();
      } catch (const Error& e) {
        rejected = e.code() == Errc::decode;
      }
      EXPECT_TRUE(rejected) << "pos " << pos << " mask " << int(mask);
    }
  }
}

TEST(Kem, BadPublicKeyEncodingIsValidationError) {
  Bytes junk(kPointSize, 0x05);
  try {
    encapsulate(ByteView(junk));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::validation);
  }
}

TEST(Kem, TamperedCapsuleIsCapsuleError) {
  const KeyPair a = generate_keypair();
  auto enc = encapsulate(a.public_key);
  enc.capsule.signature_scalar = enc.capsule.signature_scalar + Scalar::from_u64(1);
  try {
    decapsulate_original(a.secret, enc.capsule);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::capsule);
  }
}

TEST(Dem, EmptyPlaintext) {
  const KeyPair a = generate_keypair();
  const auto enc = encapsulate(a.public_key);
  const auto ct = dem_encrypt(enc.key, {}, enc.capsule);
  EXPECT_EQ(ct.body.size(), kTagSize);
  EXPECT_TRUE(dem_decrypt(enc.key, ct).empty());
}

TEST(Dem, OneMebibyteRoundTrip) {
  const KeyPair a = generate_keypair();
  const auto enc = encapsulate(a.public_key);
  const Bytes plain = random_bytes(1 << 20, 11);
  const auto ct = dem_encrypt(enc.key, plain, enc.capsule);
  EXPECT_EQ(dem_decrypt(decapsulate_original(a.secret, enc.capsule), ct), plain);
}

TEST(Dem, NonceFreshPerCall) {
  const auto enc = encapsulate(generate_keypair().public_key);
  const Bytes plain = random_bytes(10, 1);
  EXPECT_NE(dem_encrypt(enc.key, plain, enc.capsule).nonce,
            dem_encrypt(enc.key, plain, enc.capsule).nonce);
}

TEST(Dem, SwappedCapsulesFailBoth) {
  const KeyPair a = generate_keypair();
  const auto e1 = encapsulate(a.public_key);
  const auto e2 = encapsulate(a.public_key);
  const Bytes p = random_bytes(256, 12);
  auto c1 = dem_encrypt(e1.key, p, e1.capsule);
  auto c2 = dem_encrypt(e2.key, p, e2.capsule);
  std::swap(c1.associated_data, c2.associated_data);
  EXPECT_THROW(dem_decrypt(e1.key, c1), Error);
  EXPECT_THROW(dem_decrypt(e2.key, c2), Error);
}

TEST(Dem, OversizeRejected) {
  const auto enc = encapsulate(generate_keypair().public_key);
  const Bytes plain(101);
  try {
    dem_encrypt(enc.key, plain, enc.capsule, system_entropy(), 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::size);
  }
}

TEST(Dem, EveryFlippedBodyByteFails) {
  const auto enc = encapsulate(generate_keypair().public_key);
  const auto ct = dem_encrypt(enc.key, random_bytes(48, 13), enc.capsule);
  for (std::size_t pos = 0; pos < ct.body.size(); ++pos) {
    auto bad = ct;
    bad.body[pos] ^= 0x01;
    try {
      dem_decrypt(enc.key, bad);
      FAIL() << "pos " << pos;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::decryption);
    }
  }
  for (std::size_t pos = 0; pos < ct.nonce.size(); ++pos) {
    auto bad = ct;
    bad.nonce[pos] ^= 0x01;
    EXPECT_THROW(dem_decrypt(enc.key, bad), Error);
  }
}

TEST(Dem, WrongKeysFail) {
  const KeyPair a = generate_keypair();
  const KeyPair mallory = generate_keypair();
  const auto e1 = encapsulate(a.public_key);
  const auto e2 = encapsulate(a.public_key);
  const auto ct = dem_encrypt(e1.key, random_bytes(64, 14), e1.capsule);
  EXPECT_THROW(dem_decrypt(e2.key, ct), Error);
  EXPECT_THROW(dem_decrypt(decapsulate_original(mallory.secret, e1.capsule), ct), Error);
}

TEST(KFrags, ParameterChecks) {
  Parties p;
  for (auto [t, n] : {std::pair<std::size_t, std::size_t>{4, 3}, {0, 3}, {0, 0}, {1, 0}}) {
    try {
      generate_kfrags(p.alice, p.alice_signing, p.bob.public_key, t, n);
      FAIL() << t << "," << n;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::parameter);
    }
  }
}

TEST(KFrags, AllVerifyAndCarryDistinctIds) {
  Parties p;
  const auto kfrags = generate_kfrags(p.alice, p.alice_signing, p.bob.public_key, 3, 5);
  ASSERT_EQ(kfrags.size(), 5u);
  std::set<FragmentId> ids;
  for (const auto& kf : kfrags) {
    EXPECT_TRUE(verify_kfrag(kf, p.alice_signing.verifying, p.alice.public_key, p.bob.public_key));
    ids.insert(kf.fragment_id);
    EXPECT_EQ(KeyFragment::from_bytes(kf.to_bytes()), kf);
  }
  EXPECT_EQ(ids.size(), 5u);
}

TEST(KFrags, ThirdPartyDelegateeRejects) {
  Parties p;
  const KeyPair carol = generate_keypair();
  const auto kfrags = generate_kfrags(p.alice, p.alice_signing, p.bob.public_key, 1, 1);
  EXPECT_FALSE(
      verify_kfrag(kfrags[0], p.alice_signing.verifying, p.alice.public_key, carol.public_key));
  EXPECT_FALSE(verify_kfrag(kfrags[0], generate_signing_keypair().verifying, p.alice.public_key,
                            p.bob.public_key));
}

TEST(KFrags, EverySingleByteCorruptionRejected) {
  Parties p;
  const auto kf = generate_kfrags(p.alice, p.alice_signing, p.bob.public_key, 2, 3)[1];
  const auto bytes = kf.to_bytes();
  for (std::size_t pos = 0; pos < bytes.size(); ++pos) {
    for (auto mask : kMasks) {
      bool rejected = false;
      try {
        rejected = !verify_kfrag(KeyFragment::from_bytes(flip(bytes, pos, mask)),
                                 p.alice_signing.verifying, p.alice.public_key, p.bob.public_key);
      } catch (const Error& e) {
        rejected = e.code() == Errc::decode;
      }
      EXPECT_TRUE(rejected) << "pos " << pos << " mask " << int(mask);
    }
  }
}

TEST(KFrags, MalformedEncodingIsDecodeErrorNotFalse) {
  Bytes junk(KeyFragment::kSize, 0xff);
  try {
    KeyFragment::from_bytes(junk);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::decode);
  }
  EXPECT_THROW(KeyFragment::from_bytes(Bytes(10)), Error);
}

// Non-interactivity: kfrag generation is driven by nothing but public bytes
// of the delegatee.
TEST(KFrags, DelegateeNeededOnlyAsPublicKeyBytes) {
  static_assert(!std::is_default_constructible_v<PublicKey>);
  static_assert(std::is_invocable_r_v<std::vector<KeyFragment>, decltype(&generate_kfrags),
                                      const KeyPair&, const SigningKeyPair&, const PublicKey&,
                                      std::size_t, std::size_t, EntropySource&>);
  Parties p;
  const auto wire = p.bob.public_key.to_bytes();
  const PublicKey bob_from_wire = PublicKey::from_bytes(wire);
  const auto kfrags = generate_kfrags(p.alice, p.alice_signing, bob_from_wire, 1, 1);
  const auto enc = encapsulate(p.alice.public_key);
  const auto cf = reencapsulate(kfrags[0], enc.capsule);
  const std::vector<CapsuleFragment> cfs{cf};
  EXPECT_EQ(decapsulate_reencrypted(p.bob, p.alice.public_key, p.alice_signing.verifying,
                                    enc.capsule, cfs),
            enc.key);
}

TEST(CFrags, IdsPropagateAndAllVerify) {
  Parties p;
  const auto kfrags = generate_kfrags(p.alice, p.alice_signing, p.bob.public_key, 2, 4);
  const auto enc = encapsulate(p.alice.public_key);
  std::set<FragmentId> ids;
  for (const auto& kf : kfrags) {
    const auto cf = reencapsulate(kf, enc.capsule);
    EXPECT_EQ(cf.fragment_id, kf.fragment_id);
    ids.insert(cf.fragment_id);
    EXPECT_TRUE(verify_cfrag(cf, enc.capsule, p.alice_signing.verifying, p.alice.public_key,
                             p.bob.public_key));
    // Not deterministic, still verifiable.
    const auto again = reencapsulate(kf, enc.capsule);
    EXPECT_TRUE(verify_cfrag(again, enc.capsule, p.alice_signing.verifying, p.alice.public_key,
                             p.bob.public_key));
    EXPECT_EQ(CapsuleFragment::from_bytes(cf.to_bytes()), cf);
  }
  EXPECT_EQ(ids.size(), 4u);
}

TEST(CFrags, RejectedAgainstDifferentCapsule) {
  Parties p;
  const auto kf = generate_kfrags(p.alice, p.alice_signing, p.bob.public_key, 1, 1)[0];
  const auto x = encapsulate(p.alice.public_key);
  const auto y = encapsulate(p.alice.public_key);
  const auto cf = reencapsulate(kf, x.capsule);
  EXPECT_FALSE(
      verify_cfrag(cf, y.capsule, p.alice_signing.verifying, p.alice.public_key, p.bob.public_key));
}

TEST(CFrags, ReencapsulateRejectsInvalidCapsule) {
  Parties p;
  const auto kf = generate_kfrags(p.alice, p.alice_signing, p.bob.public_key, 1, 1)[0];
  auto enc = encapsulate(p.alice.public_key);
  enc.capsule.point_v = enc.capsule.point_v + Point::generator();
  try {
    reencapsulate(kf, enc.capsule);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::capsule);
  }
}

TEST(CFrags, CrossWiredDelegationFailsEndToEnd) {
  // kfrag for Alice->Bob applied to a capsule of Dave's upload.
  Parties p;
  const KeyPair dave = generate_keypair();
  const auto dave_signing = generate_signing_keypair();
  const auto kf = generate_kfrags(p.alice, p.alice_signing, p.bob.public_key, 1, 1)[0];
  const auto dave_enc = encapsulate(dave.public_key);
  const auto ct = dem_encrypt(dave_enc.key, random_bytes(100, 15), dave_enc.capsule);
  const std::vector<CapsuleFragment> cfs{reencapsulate(kf, dave_enc.capsule)};
  EXPECT_FALSE(verify_cfrag(cfs[0], dave_enc.capsule, dave_signing.verifying, dave.public_key,
                            p.bob.public_key));
  EXPECT_THROW(decapsulate_reencrypted(p.bob, dave.public_key, dave_signing.verifying,
                                       dave_enc.capsule, cfs),
               Error);
  // Even if Bob is told the cfrags come from Alice, the key does not open Dave's data.
  try {
    const auto k = decapsulate_reencrypted(p.bob, p.alice.public_key, p.alice_signing.verifying,
                                           dave_enc.capsule, cfs);
    EXPECT_THROW(dem_decrypt(k, ct), Error);
  } catch (const Error&) {
    SUCCEED();
  }
}

TEST(CFrags, EverySingleByteCorruptionRejected) {
  Parties p;
  const auto kf = generate_kfrags(p.alice, p.alice_signing, p.bob.public_key, 1, 2)[0];
  const auto enc = encapsulate(p.alice.public_key);
  const auto bytes = reencapsulate(kf, enc.capsule).to_bytes();
  for (std::size_t pos = 0; pos < bytes.size(); ++pos) {
    for (auto mask : kMasks) {
      bool rejected = false;
      try {
        rejected = !verify_cfrag(CapsuleFragment::from_bytes(flip(bytes, pos, mask)), enc.capsule,
                                 p.alice_signing.verifying, p.alice.public_key, p.bob.public_key);
      } catch (const Error& e) {
        rejected = e.code() == Errc::decode;
      }
      EXPECT_TRUE(rejected) << "pos " << pos << " mask " << int(mask);
    }
  }
}

TEST(Decapsulate, SubsetsOfTwoOfThree) {
  Parties p;
  const auto kfrags = generate_kfrags(p.alice, p.alice_signing, p.bob.public_key, 2, 3);
  const auto enc = encapsulate(p.alice.public_key);
  std::vector<CapsuleFragment> cf;
  for (const auto& kf : kfrags) cf.push_back(reencapsulate(kf, enc.capsule));
  auto open = [&](std::vector<CapsuleFragment> subset) {
    return decapsulate_reencrypted(p.bob, p.alice.public_key, p.alice_signing.verifying,
                                   enc.capsule, subset);
  };
  EXPECT_EQ(open({cf[0], cf[1]}), enc.key);
  EXPECT_EQ(open({cf[1], cf[2]}), enc.key);
  EXPECT_EQ(open({cf[2], cf[0]}), enc.key);
  EXPECT_EQ(open({cf[0], cf[1], cf[2]}), enc.key);
  for (auto subset : {std::vector<CapsuleFragment>{cf[0]}, {cf[0], cf[0]}, {}}) {
    try {
      open(subset);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::threshold);
    }
  }
}

TEST(Decapsulate, PreverifiedFragmentsOpenTheSameKey) {
  Parties p;
  const auto kfrags = generate_kfrags(p.alice, p.alice_signing, p.bob.public_key, 2, 3);
  const auto enc = encapsulate(p.alice.public_key);
  std::vector<VerifiedCapsuleFragment> verified;
  for (const auto& kf : kfrags) {
    auto v = verify_capsule_fragment(reencapsulate(kf, enc.capsule), enc.capsule,
                                     p.alice_signing.verifying, p.alice.public_key, p.bob.public_key);
    ASSERT_TRUE(v);
    verified.push_back(std::move(*v));
  }
  EXPECT_EQ(decapsulate_reencrypted(p.bob, p.alice.public_key, enc.capsule, verified), enc.key);
  const std::vector<VerifiedCapsuleFragment> one{verified[0], verified[0]};
  try {
    decapsulate_reencrypted(p.bob, p.alice.public_key, enc.capsule, one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::threshold);
  }

  auto bad = reencapsulate(kfrags[0], enc.capsule);
  bad.point_v1 = bad.point_v1 + Point::generator();
  EXPECT_FALSE(verify_capsule_fragment(bad, enc.capsule, p.alice_signing.verifying,
                                       p.alice.public_key, p.bob.public_key));
}

TEST(Decapsulate, PreverifiedFragmentsAreBoundToTheirCapsule) {
  Parties p;
  const auto kfrags = generate_kfrags(p.alice, p.alice_signing, p.bob.public_key, 1, 1);
  const auto first = encapsulate(p.alice.public_key);
  const auto second = encapsulate(p.alice.public_key);
  const std::vector<VerifiedCapsuleFragment> for_first{
      *verify_capsule_fragment(reencapsulate(kfrags[0], first.capsule), first.capsule,
                               p.alice_signing.verifying, p.alice.public_key, p.bob.public_key)};
  try {
    decapsulate_reencrypted(p.bob, p.alice.public_key, second.capsule, for_first);
    FAIL();
  } catch (const FragmentVerificationError& e) {
    EXPECT_EQ(e.index(), 0u);
  }
  const auto carol = generate_keypair();
  EXPECT_THROW(decapsulate_reencrypted(carol, p.alice.public_key, first.capsule, for_first),
               FragmentVerificationError);
}

TEST(Decapsulate, NamesTheBadFragment) {
  Parties p;
  const auto kfrags = generate_kfrags(p.alice, p.alice_signing, p.bob.public_key, 2, 3);
  const auto enc = encapsulate(p.alice.public_key);
  std::vector<CapsuleFragment> cf;
  for (const auto& kf : kfrags) cf.push_back(reencapsulate(kf, enc.capsule));
  cf[1].point_e1 = cf[1].point_e1 + Point::generator();
  try {
    decapsulate_reencrypted(p.bob, p.alice.public_key, p.alice_signing.verifying, enc.capsule, cf);
    FAIL();
  } catch (const FragmentVerificationError& e) {
    EXPECT_EQ(e.index(), 1u);
    EXPECT_EQ(e.code(), Errc::verification);
  }
}

TEST(Properties, EndToEndRoundTripRandomPlaintexts) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const KeyPair a = generate_keypair();
    const Bytes plain = random_bytes(rng() % 5000, rng());
    const auto enc = encapsulate(a.public_key);
    const auto ct = dem_encrypt(enc.key, plain, enc.capsule);
    EXPECT_EQ(dem_decrypt(decapsulate_original(a.secret, enc.capsule), ct), plain);
  }
}

// Capsule under pk_B, kfrags for A->B: A must never get in through them.
TEST(Properties, Unidirectional) {
  for (int trial = 0; trial < 100; ++trial) {
    Parties p;
    const auto kfrags = generate_kfrags(p.alice, p.alice_signing, p.bob.public_key, 1, 1);
    const auto bob_enc = encapsulate(p.bob.public_key);
    const auto ct = dem_encrypt(bob_enc.key, random_bytes(32, trial), bob_enc.capsule);
    const std::vector<CapsuleFragment> cfs{reencapsulate(kfrags[0], bob_enc.capsule)};
    bool opened = false;
    for (const auto* delegator_pk : {&p.bob.public_key, &p.alice.public_key}) {
      try {
        const auto k = decapsulate_reencrypted(p.alice, *delegator_pk, p.alice_signing.verifying,
                                               bob_enc.capsule, cfs);
        dem_decrypt(k, ct);
        opened = true;
      } catch (const Error&) {
      }
    }
    EXPECT_FALSE(opened) << "trial " << trial;
  }
}

}  // namespace
}  // namespace ehrshare::pre
