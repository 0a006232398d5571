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

#include "ehrshare/pre/curve.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/obj_mac.h>

#include "ehrshare/common/error.hpp"
#include "ehrshare/pre/hash.hpp"

namespace ehrshare::pre {
namespace detail {

void BnDeleter::operator()(bignum_st* bn) const noexcept { BN_clear_free(bn); }
void PointDeleter::operator()(ec_point_st* p) const noexcept { EC_POINT_clear_free(p); }

}  // namespace detail

namespace {

const EC_GROUP* group() {
  static const EC_GROUP* g = [] {
    EC_GROUP* created = EC_GROUP_new_by_curve_name(NID_secp256k1);
    if (created == nullptr) throw Error(Errc::internal, "secp256k1 unavailable");
    return created;
  }();
  return g;
}

const BIGNUM* order() {
  static const BIGNUM* q = EC_GROUP_get0_order(group());
  return q;
}

BN_CTX* bn_ctx() {
  struct CtxDeleter {
    void operator()(BN_CTX* c) const noexcept { BN_CTX_free(c); }
  };
  thread_local std::unique_ptr<BN_CTX, CtxDeleter> ctx(BN_CTX_new());
  if (!ctx) throw Error(Errc::internal, "BN_CTX_new failed");
  return ctx.get();
}

BIGNUM* new_bn() {
  BIGNUM* bn = BN_new();
  if (bn == nullptr) throw std::bad_alloc();
  return bn;
}

EC_POINT* new_point() {
  EC_POINT* p = EC_POINT_new(group());
  if (p == nullptr) throw std::bad_alloc();
  return p;
}

void check(int rc, const char* what) {
  if (rc != 1) throw Error(Errc::internal, what);
}

}  // namespace

// ---- Scalar ---------------------------------------------------------------

Scalar::Scalar() : bn_(new_bn()) { BN_zero(bn_.get()); }
Scalar::Scalar(bignum_st* owned) : bn_(owned) {}
Scalar::Scalar(const Scalar& other) : bn_(BN_dup(other.bn_.get())) {
  if (!bn_) throw std::bad_alloc();
}
Scalar& Scalar::operator=(const Scalar& other) {
  if (this != &other) {
    if (!bn_) bn_.reset(new_bn());
    if (BN_copy(bn_.get(), other.bn_.get()) == nullptr) throw Error(Errc::internal, "BN_copy");
  }
  return *this;
}
Scalar::~Scalar() = default;

Scalar Scalar::from_u64(std::uint64_t v) {
  Scalar s;
  check(BN_set_word(s.bn_.get(), v), "BN_set_word");
  check(BN_nnmod(s.bn_.get(), s.bn_.get(), order(), bn_ctx()), "BN_nnmod");
  return s;
}

Scalar Scalar::from_bytes(ByteView bytes) {
  if (bytes.size() != kScalarSize) throw Error(Errc::decode, "scalar: expected 32 bytes");
  Scalar s;
  if (BN_bin2bn(bytes.data(), static_cast<int>(bytes.size()), s.bn_.get()) == nullptr) {
    throw Error(Errc::internal, "BN_bin2bn");
  }
  if (BN_cmp(s.bn_.get(), order()) >= 0) throw Error(Errc::decode, "scalar: out of range");
  return s;
}

Scalar Scalar::from_bytes_reduced(ByteView bytes) {
  Scalar s;
  if (BN_bin2bn(bytes.data(), static_cast<int>(bytes.size()), s.bn_.get()) == nullptr) {
    throw Error(Errc::internal, "BN_bin2bn");
  }
  check(BN_nnmod(s.bn_.get(), s.bn_.get(), order(), bn_ctx()), "BN_nnmod");
  return s;
}

Scalar Scalar::random(EntropySource& entropy) {
  ScalarBytes buf{};
  // Rejection sampling; q is within 2^-128 of 2^256 so retries are rare.
  for (int attempt = 0; attempt < 256; ++attempt) {
    entropy.fill(buf);
    Scalar s;
    BN_bin2bn(buf.data(), static_cast<int>(buf.size()), s.bn_.get());
    OPENSSL_cleanse(buf.data(), buf.size());
    if (!BN_is_zero(s.bn_.get()) && BN_cmp(s.bn_.get(), order()) < 0) return s;
  }
  throw Error(Errc::entropy, "entropy source keeps producing invalid scalars");
}

ScalarBytes Scalar::to_bytes() const {
  ScalarBytes out{};
  if (BN_bn2binpad(bn_.get(), out.data(), static_cast<int>(out.size())) !=
      static_cast<int>(out.size())) {
    throw Error(Errc::internal, "BN_bn2binpad");
  }
  return out;
}

bool Scalar::is_zero() const { return BN_is_zero(bn_.get()); }

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(Errc::parameter, "inverse of zero scalar");
  Scalar r;
  if (BN_mod_inverse(r.bn_.get(), bn_.get(), order(), bn_ctx()) == nullptr) {
    throw Error(Errc::internal, "BN_mod_inverse");
  }
  return r;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  Scalar r;
  check(BN_mod_add(r.bn_.get(), a.bn_.get(), b.bn_.get(), order(), bn_ctx()), "BN_mod_add");
  return r;
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  Scalar r;
  check(BN_mod_sub(r.bn_.get(), a.bn_.get(), b.bn_.get(), order(), bn_ctx()), "BN_mod_sub");
  return r;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar r;
  check(BN_mod_mul(r.bn_.get(), a.bn_.get(), b.bn_.get(), order(), bn_ctx()), "BN_mod_mul");
  return r;
}

Scalar operator-(const Scalar& a) { return Scalar() - a; }

bool operator==(const Scalar& a, const Scalar& b) { return BN_cmp(a.bn_.get(), b.bn_.get()) == 0; }

// ---- Point ----------------------------------------------------------------

Point::Point() : p_(new_point()) { check(EC_POINT_set_to_infinity(group(), p_.get()), "inf"); }
Point::Point(ec_point_st* owned) : p_(owned) {}
Point::Point(const Point& other) : p_(EC_POINT_dup(other.p_.get(), group())) {
  if (!p_) throw std::bad_alloc();
}
Point& Point::operator=(const Point& other) {
  if (this != &other) {
    if (!p_) p_.reset(new_point());
    check(EC_POINT_copy(p_.get(), other.p_.get()), "EC_POINT_copy");
  }
  return *this;
}
Point::~Point() = default;

Point Point::generator() {
  return Point(EC_POINT_dup(EC_GROUP_get0_generator(group()), group()));
}

Point Point::base_mul(const Scalar& k) {
  Point r(new_point());
  check(EC_POINT_mul(group(), r.p_.get(), k.raw(), nullptr, nullptr, bn_ctx()), "EC_POINT_mul");
  return r;
}

Point Point::from_bytes(ByteView bytes) {
  if (bytes.size() != kPointSize || (bytes[0] != 0x02 && bytes[0] != 0x03)) {
    throw Error(Errc::decode, "point: expected 33-byte compressed encoding");
  }
  Point r(new_point());
  if (EC_POINT_oct2point(group(), r.p_.get(), bytes.data(), bytes.size(), bn_ctx()) != 1) {
    throw Error(Errc::decode, "point: not on curve");
  }
  if (r.is_infinity()) throw Error(Errc::decode, "point: infinity");
  return r;
}

Point Point::hash_to_point(std::string_view dst, ByteView data) {
  Bytes input(dst.begin(), dst.end());
  input.insert(input.end(), data.begin(), data.end());
  input.resize(input.size() + 4);
  for (std::uint32_t counter = 0;; ++counter) {
    for (int i = 0; i < 4; ++i) {
      input[input.size() - 4 + i] = static_cast<std::uint8_t>(counter >> (24 - 8 * i));
    }
    PointBytes candidate{};
    candidate[0] = 0x02;
    unsigned int len = 0;
    check(EVP_Digest(input.data(), input.size(), candidate.data() + 1, &len, EVP_sha256(),
                     nullptr),
          "EVP_Digest");
    try {
      return from_bytes(candidate);
    } catch (const Error&) {
      // x not on the curve, try the next counter
    }
  }
}

PointBytes Point::to_bytes() const {
  if (is_infinity()) throw Error(Errc::internal, "cannot encode point at infinity");
  PointBytes out{};
  const std::size_t n = EC_POINT_point2oct(group(), p_.get(), POINT_CONVERSION_COMPRESSED,
                                           out.data(), out.size(), bn_ctx());
  if (n != out.size()) throw Error(Errc::internal, "EC_POINT_point2oct");
  return out;
}

bool Point::is_infinity() const { return EC_POINT_is_at_infinity(group(), p_.get()) == 1; }

Point operator+(const Point& a, const Point& b) {
  Point r(new_point());
  check(EC_POINT_add(group(), r.p_.get(), a.p_.get(), b.p_.get(), bn_ctx()), "EC_POINT_add");
  return r;
}

Point operator-(const Point& a, const Point& b) {
  Point neg(b);
  check(EC_POINT_invert(group(), neg.p_.get(), bn_ctx()), "EC_POINT_invert");
  return a + neg;
}

Point operator*(const Point& p, const Scalar& k) {
  Point r(new_point());
  check(EC_POINT_mul(group(), r.p_.get(), nullptr, p.p_.get(), k.raw(), bn_ctx()),
        "EC_POINT_mul");
  return r;
}

bool operator==(const Point& a, const Point& b) {
  return EC_POINT_cmp(group(), a.p_.get(), b.p_.get(), bn_ctx()) == 0;
}

const Point& commitment_base() {
  static const Point u = Point::hash_to_point(dst::kCommitmentBase, {});
  return u;
}

}  // namespace ehrshare::pre
