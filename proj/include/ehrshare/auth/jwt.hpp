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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ehrshare/common/bytes.hpp"
#include "ehrshare/common/clock.hpp"

namespace ehrshare::auth {

// Registered claims (sub, iat, exp, jti) plus the platform's own. Times
// are NumericDate seconds.
struct Claims {
  std::string sub;
  std::vector<std::string> roles;
  std::int64_t iat = 0;
  std::int64_t exp = 0;
  std::string jti;
  std::string typ;                  // "access" | "refresh"
  std::optional<std::string> fam;   // refresh family
  std::optional<std::string> csrf;  // hex SHA-256 of the paired CSRF token

  bool has_role(std::string_view role) const;

  friend bool operator==(const Claims&, const Claims&) = default;
};

// HS256 compact JWS. verify() errors: Errc::token_malformed for anything
// that does not parse, Errc::token_signature for a MAC mismatch and
// Errc::token_expired once now >= exp.
class JwtCodec {
 public:
  explicit JwtCodec(Bytes key);

  std::string sign(const Claims& claims) const;
  Claims verify(std::string_view token, Timestamp now) const;
  // Signature is checked, expiry is not.
  Claims verify_ignoring_expiry(std::string_view token) const;

 private:
  Bytes key_;
};

std::string sha256_hex(std::string_view data);

}  // namespace ehrshare::auth
