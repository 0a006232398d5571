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

#include "ehrshare/pre/capsule.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "ehrshare/common/error.hpp"
#include "ehrshare/pre/hash.hpp"

namespace ehrshare::pre {
namespace {

Scalar capsule_challenge(const Point& e, const Point& v) {
  return ScalarHasher(dst::kCapsuleCheck).update(e).update(v).finalize();
}

}  // namespace

bool Capsule::verify() const {
  if (point_e.is_infinity() || point_v.is_infinity()) return false;
  const Scalar h = capsule_challenge(point_e, point_v);
  return Point::base_mul(signature_scalar) == point_v + point_e * h;
}

Capsule::Encoded Capsule::to_bytes() const {
  Encoded out{};
  const auto e = point_e.to_bytes();
  const auto v = point_v.to_bytes();
  const auto s = signature_scalar.to_bytes();
  auto it = std::copy(e.begin(), e.end(), out.begin());
  it = std::copy(v.begin(), v.end(), it);
  std::copy(s.begin(), s.end(), it);
  return out;
}

Capsule Capsule::from_bytes(ByteView bytes) {
  if (bytes.size() != kSize) throw Error(Errc::decode, "capsule: expected 98 bytes");
  return Capsule{
      Point::from_bytes(bytes.subspan(0, kPointSize)),
      Point::from_bytes(bytes.subspan(kPointSize, kPointSize)),
      Scalar::from_bytes(bytes.subspan(2 * kPointSize, kScalarSize)),
  };
}

Encapsulation encapsulate(const PublicKey& recipient, EntropySource& entropy) {
  const Scalar r = Scalar::random(entropy);
  const Scalar u = Scalar::random(entropy);
  Point e = Point::base_mul(r);
  Point v = Point::base_mul(u);
  const Scalar h = capsule_challenge(e, v);
  Scalar s = u + r * h;
  const Point shared = recipient.point() * (r + u);
  return Encapsulation{derive_symmetric_key(shared),
                       Capsule{std::move(e), std::move(v), std::move(s)}};
}

Encapsulation encapsulate(ByteView recipient_public_key, EntropySource& entropy) {
  std::optional<PublicKey> pk;
  try {
    pk.emplace(PublicKey::from_bytes(recipient_public_key));
  } catch (const Error& e) {
    throw Error(Errc::validation, std::string("recipient public key: ") + e.what());
  }
  return encapsulate(*pk, entropy);
}

SymmetricKey decapsulate_original(const SecretKey& owner, const Capsule& capsule) {
  if (!capsule.verify()) throw Error(Errc::capsule, "capsule failed its self-check");
  return derive_symmetric_key((capsule.point_e + capsule.point_v) * owner.scalar());
}

}  // namespace ehrshare::pre
