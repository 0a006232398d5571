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

#include <mutex>
#include <optional>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "ehrshare/auth/auth_service.hpp"
#include "ehrshare/auth/user_directory.hpp"

namespace ehrshare::net {

inline constexpr const char* kRefreshCookie = "refresh_token";
inline constexpr const char* kCsrfHeader = "X-CSRF-Token";

nlohmann::json profile_to_json(const auth::UserProfile& p);
auth::UserProfile profile_from_json(const nlohmann::json& j);
nlohmann::json claims_to_json(const auth::Claims& c);
auth::Claims claims_from_json(const nlohmann::json& j);

// Value of one cookie from a Cookie header, if present.
std::optional<std::string> cookie_value(const std::string& header, std::string_view name);

// POST /auth/register, /auth/login, /auth/refresh, /auth/logout,
// /auth/service-token; GET /auth/verify, /auth/users/{id},
// /auth/trusted-entity. The last two need a service token.
void mount_auth_routes(httplib::Server& server, auth::AuthService& service);

// A browser-like session: the refresh token lives in what would be the
// http-only cookie, the rest is what page code sees.
struct Session {
  std::string user_id;
  std::string access_token;
  std::string csrf_token;
  std::string refresh_cookie;
  std::int64_t access_expires_at = 0;
  std::int64_t refresh_expires_at = 0;
  std::string set_cookie;  // raw Set-Cookie header from the last response
};

class HttpAuthClient final : public auth::UserDirectory, public auth::TokenVerifier {
 public:
  explicit HttpAuthClient(std::string base_url,
                          std::string client_id = {},
                          std::string client_secret = {});

  auth::UserProfile register_user(const nlohmann::json& body) const;
  Session login(const std::string& email, const std::string& password) const;
  Session refresh(const Session& session) const;
  void logout(const Session& session) const;

  auth::Claims verify_access_token(std::string_view token) const override;
  std::optional<auth::UserProfile> find_user(const std::string& user_id) const override;
  std::optional<auth::UserProfile> trusted_entity() const override;

  // Cached service-to-service token, renewed a minute before expiry.
  std::string service_token() const;

 private:
  std::string base_url_;
  std::string client_id_;
  std::string client_secret_;
  mutable std::mutex mu_;
  mutable std::string token_;
  mutable std::int64_t token_exp_ = 0;
};

}  // namespace ehrshare::net
