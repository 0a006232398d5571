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
#include <memory>
#include <string_view>

#include "ehrshare/common/bytes.hpp"
#include "ehrshare/pre/entropy.hpp"

struct bignum_st;
struct ec_point_st;

namespace ehrshare::pre {

// The whole platform runs on secp256k1. Scalars are big-endian 32 bytes,
// points are SEC1 compressed (33 bytes). The point at infinity has no
// encoding and is never accepted from the wire.
inline constexpr std::size_t kScalarSize = 32;
inline constexpr std::size_t kPointSize = 33;

using ScalarBytes = std::array<std::uint8_t, kScalarSize>;
using PointBytes = std::array<std::uint8_t, kPointSize>;

namespace detail {
struct BnDeleter {
  void operator()(bignum_st* bn) const noexcept;
};
struct PointDeleter {
  void operator()(ec_point_st* p) const noexcept;
};
}  // namespace detail

// Element of Z_q, q = order of the secp256k1 group.
class Scalar {
 public:
  Scalar();  // zero
  Scalar(const Scalar& other);
  Scalar(Scalar&&) noexcept = default;
  Scalar& operator=(const Scalar& other);
  Scalar& operator=(Scalar&&) noexcept = default;
  ~Scalar();

  static Scalar from_u64(std::uint64_t v);
  // Exactly 32 bytes, value must be below the group order.
  static Scalar from_bytes(ByteView bytes);
  // Any length, reduced modulo the group order.
  static Scalar from_bytes_reduced(ByteView bytes);
  // Uniform nonzero scalar by rejection sampling.
  static Scalar random(EntropySource& entropy);

  ScalarBytes to_bytes() const;
  bool is_zero() const;
  // Throws Error(Errc::parameter) for zero.
  Scalar inverse() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a);
  friend bool operator==(const Scalar& a, const Scalar& b);

  const bignum_st* raw() const { return bn_.get(); }

 private:
  explicit Scalar(bignum_st* owned);
  std::unique_ptr<bignum_st, detail::BnDeleter> bn_;
};

class Point {
 public:
  Point();  // infinity
  Point(const Point& other);
  Point(Point&&) noexcept = default;
  Point& operator=(const Point& other);
  Point& operator=(Point&&) noexcept = default;
  ~Point();

  static Point generator();
  // Multiplies the generator; faster than generator() * k.
  static Point base_mul(const Scalar& k);
  // 33-byte compressed encoding; throws Error(Errc::decode) otherwise.
  static Point from_bytes(ByteView bytes);
  // Deterministic try-and-increment map; nobody knows the discrete log of
  // the result relative to the generator.
  static Point hash_to_point(std::string_view dst, ByteView data);

  // Throws Error(Errc::internal) for the point at infinity.
  PointBytes to_bytes() const;
  bool is_infinity() const;

  friend Point operator+(const Point& a, const Point& b);
  friend Point operator-(const Point& a, const Point& b);
  friend Point operator*(const Point& p, const Scalar& k);
  friend Point operator*(const Scalar& k, const Point& p) { return p * k; }
  friend bool operator==(const Point& a, const Point& b);

 private:
  explicit Point(ec_point_st* owned);
  std::unique_ptr<ec_point_st, detail::PointDeleter> p_;
};

// Second generator used for re-encryption key commitments.
const Point& commitment_base();

}  // namespace ehrshare::pre
