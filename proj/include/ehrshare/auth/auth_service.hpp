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

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ehrshare/auth/jwt.hpp"
#include "ehrshare/auth/password.hpp"
#include "ehrshare/auth/user_directory.hpp"
#include "ehrshare/common/clock.hpp"
#include "ehrshare/storage/document_store.hpp"
#include "ehrshare/storage/ttl_store.hpp"

namespace ehrshare::auth {

struct AuthConfig {
  Bytes jwt_key;  // HMAC-SHA256 key, at least 32 bytes
  std::chrono::seconds access_ttl = std::chrono::minutes(15);
  std::chrono::seconds refresh_ttl = std::chrono::hours(24 * 7);
  std::chrono::seconds service_ttl = std::chrono::minutes(15);
  PasswordParams password;
  std::size_t min_password_length = 10;
  // client_id -> client_secret for service-to-service tokens.
  std::map<std::string, std::string> service_clients;
};

struct RegisterRequest {
  std::string name;
  std::string email;
  std::string password;
  Bytes public_key;
  Bytes verifying_key;
  std::vector<std::string> roles;
};

// Strict JSON decoding: exactly the known fields, keys base64. Anything
// else (a "secret_key" field, say) is a validation error.
RegisterRequest parse_register_request(const nlohmann::json& body);

struct TokenPair {
  std::string access_token;
  std::string refresh_token;
  std::string csrf_token;
  std::int64_t access_expires_at = 0;   // seconds
  std::int64_t refresh_expires_at = 0;  // seconds
};

// Authorization server: accounts, JWT issuance and refresh rotation.
//
// Each login opens a refresh family stored in the TTL store as
// {"current": <jti>, "revoked": bool}. Only the current jti is accepted;
// presenting any older member revokes the family for good.
class AuthService final : public UserDirectory, public TokenVerifier {
 public:
  AuthService(storage::DocumentStore& users,
              storage::TtlStore& families,
              AuthConfig config,
              const Clock& clock = system_clock());

  UserProfile register_user(const RegisterRequest& request);
  TokenPair login(std::string_view email, std::string_view password);
  TokenPair refresh(std::string_view refresh_token);
  void logout(std::string_view refresh_token);

  Claims verify_access_token(std::string_view token) const override;
  // Throws Errc::forbidden unless the CSRF token pairs with the refresh token.
  void check_csrf(std::string_view refresh_token, std::string_view csrf_token) const;
  std::string issue_service_token(std::string_view client_id, std::string_view client_secret);

  std::optional<UserProfile> find_user(const std::string& user_id) const override;
  std::optional<UserProfile> trusted_entity() const override;

  const AuthConfig& config() const { return config_; }

 private:
  TokenPair issue_pair(const std::string& user_id,
                       const std::vector<std::string>& roles,
                       const std::string& family,
                       const std::string& jti,
                       std::int64_t refresh_exp);
  void revoke_family(const std::string& family);

  storage::DocumentStore& users_;
  storage::TtlStore& families_;
  AuthConfig config_;
  const Clock& clock_;
  JwtCodec jwt_;
  std::string dummy_hash_;
};

}  // namespace ehrshare::auth
