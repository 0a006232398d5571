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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ehrshare/auth/jwt.hpp"
#include "ehrshare/common/bytes.hpp"

namespace ehrshare::auth {

namespace roles {
inline constexpr std::string_view kPatient = "patient";
inline constexpr std::string_view kPractitioner = "practitioner";
inline constexpr std::string_view kTrustedEntity = "trusted_entity";
inline constexpr std::string_view kService = "service";
}  // namespace roles

// What other services may know about an account: never the password hash,
// never any secret key.
struct UserProfile {
  std::string user_id;
  std::string name;
  std::string email;
  std::vector<std::string> roles;
  Bytes public_key;     // 33-byte compressed point
  Bytes verifying_key;  // 33-byte compressed point

  bool has_role(std::string_view role) const;
};

class UserDirectory {
 public:
  virtual ~UserDirectory() = default;
  virtual std::optional<UserProfile> find_user(const std::string& user_id) const = 0;
  virtual std::optional<UserProfile> trusted_entity() const = 0;
};

// Checks a bearer access token and returns its claims; throws the
// token_* / unauthorized errors otherwise.
class TokenVerifier {
 public:
  virtual ~TokenVerifier() = default;
  virtual Claims verify_access_token(std::string_view token) const = 0;
};

}  // namespace ehrshare::auth
