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

#include "ehrshare/auth/auth_service.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "ehrshare/common/error.hpp"
#include "ehrshare/common/ids.hpp"
#include "ehrshare/pre/keys.hpp"

namespace ehrshare::auth {
namespace {

using nlohmann::json;

constexpr std::string_view kUsers = "users";
constexpr std::string_view kUsersByEmail = "users_by_email";
constexpr std::string_view kSingletons = "singletons";
constexpr std::string_view kTrustedEntitySlot = "trusted_entity";

std::string family_key(std::string_view family) { return "refresh_family:" + std::string(family); }

std::string normalize_email(std::string_view email) {
  std::string out(email);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::int64_t seconds(Timestamp t) { return to_millis(t) / 1000; }

UserProfile profile_from(const json& doc) {
  UserProfile p;
  p.user_id = doc.at("user_id").get<std::string>();
  p.name = doc.at("name").get<std::string>();
  p.email = doc.at("email").get<std::string>();
  p.roles = doc.at("roles").get<std::vector<std::string>>();
  p.public_key = base64_decode(doc.at("public_key").get<std::string>());
  p.verifying_key = base64_decode(doc.at("verifying_key").get<std::string>());
  return p;
}

[[noreturn]] void invalid_credentials() {
  throw Error(Errc::unauthorized, "invalid email or password");
}

Bytes decode_key(const json& body, const char* field) {
  const auto& v = body.at(field);
  if (!v.is_string()) throw Error(Errc::validation, std::string(field) + " must be a string");
  Bytes raw;
  try {
    raw = base64_decode(v.get<std::string>());
  } catch (const Error&) {
    throw Error(Errc::validation, std::string(field) + " is not valid base64");
  }
  return raw;
}

}  // namespace

bool UserProfile::has_role(std::string_view role) const {
  return std::find(roles.begin(), roles.end(), role) != roles.end();
}

RegisterRequest parse_register_request(const json& body) {
  static const std::set<std::string> kKnown = {"name",       "email",         "password",
                                               "public_key", "verifying_key", "roles"};
  if (!body.is_object()) throw Error(Errc::validation, "request body must be an object");
  for (const auto& [key, _] : body.items()) {
    if (!kKnown.contains(key)) throw Error(Errc::validation, "unexpected field: " + key);
  }
  for (const auto& key : kKnown) {
    if (!body.contains(key)) throw Error(Errc::validation, "missing field: " + key);
  }
  RegisterRequest r;
  try {
    r.name = body.at("name").get<std::string>();
    r.email = body.at("email").get<std::string>();
    r.password = body.at("password").get<std::string>();
    r.roles = body.at("roles").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(Errc::validation, std::string("bad field type: ") + e.what());
  }
  r.public_key = decode_key(body, "public_key");
  r.verifying_key = decode_key(body, "verifying_key");
  return r;
}

AuthService::AuthService(storage::DocumentStore& users,
                         storage::TtlStore& families,
                         AuthConfig config,
                         const Clock& clock)
    : users_(users),
      families_(families),
      config_(std::move(config)),
      clock_(clock),
      jwt_(config_.jwt_key),
      dummy_hash_(hash_password("not-a-real-password", config_.password)) {
  if (config_.access_ttl >= config_.refresh_ttl) {
    throw Error(Errc::configuration, "access TTL must be shorter than refresh TTL");
  }
}

UserProfile AuthService::register_user(const RegisterRequest& req) {
  if (req.name.empty()) throw Error(Errc::validation, "name is required");
  const auto at = req.email.find('@');
  if (at == std::string::npos || at == 0 || at + 1 == req.email.size()) {
    throw Error(Errc::validation, "email is malformed");
  }
  if (req.password.size() < config_.min_password_length) {
    throw Error(Errc::validation, "password must be at least " +
                                      std::to_string(config_.min_password_length) +
                                      " characters");
  }
  if (req.roles.empty()) throw Error(Errc::validation, "at least one role is required");
  std::vector<std::string> roles;
  for (const auto& role : req.roles) {
    if (role != roles::kPatient && role != roles::kPractitioner && role != roles::kTrustedEntity) {
      throw Error(Errc::validation, "unknown role: " + role);
    }
    if (std::find(roles.begin(), roles.end(), role) == roles.end()) roles.push_back(role);
  }
  try {
    (void)pre::PublicKey::from_bytes(req.public_key);
    (void)pre::VerifyingKey::from_bytes(req.verifying_key);
  } catch (const Error&) {
    throw Error(Errc::validation, "public_key or verifying_key does not decode");
  }

  UserProfile profile{new_uuid(), req.name, req.email, roles, req.public_key, req.verifying_key};
  const std::string email_key = normalize_email(req.email);
  const std::string hash = hash_password(req.password, config_.password);

  if (!users_.insert(kUsersByEmail, email_key, json{{"user_id", profile.user_id}})) {
    throw Error(Errc::conflict, "email already registered");
  }
  const bool trusted = profile.has_role(roles::kTrustedEntity);
  if (trusted &&
      !users_.insert(kSingletons, kTrustedEntitySlot, json{{"user_id", profile.user_id}})) {
    users_.remove(kUsersByEmail, email_key);
    throw Error(Errc::conflict, "a trusted entity already exists");
  }
  try {
    users_.put(kUsers, profile.user_id,
               json{{"user_id", profile.user_id},
                    {"name", profile.name},
                    {"email", profile.email},
                    {"email_key", email_key},
                    {"password_hash", hash},
                    {"roles", profile.roles},
                    {"public_key", base64_encode(profile.public_key)},
                    {"verifying_key", base64_encode(profile.verifying_key)},
                    {"created_at", to_millis(clock_.now())}});
  } catch (...) {
    if (trusted) users_.remove(kSingletons, kTrustedEntitySlot);
    users_.remove(kUsersByEmail, email_key);
    throw;
  }
  return profile;
}

TokenPair AuthService::login(std::string_view email, std::string_view password) {
  const auto index = users_.get(kUsersByEmail, normalize_email(email));
  std::optional<json> user;
  if (index) user = users_.get(kUsers, index->at("user_id").get<std::string>());
  if (!user) {
    // Same work as a real check so timing does not reveal which emails exist.
    (void)verify_password(password, dummy_hash_);
    invalid_credentials();
  }
  if (!verify_password(password, user->at("password_hash").get<std::string>())) {
    invalid_credentials();
  }
  const std::string family = new_uuid();
  const std::string jti = new_uuid();
  const std::int64_t refresh_exp = seconds(clock_.now()) + config_.refresh_ttl.count();
  families_.set(family_key(family),
                json{{"current", jti}, {"revoked", false}, {"sub", user->at("user_id")}}.dump(),
                config_.refresh_ttl);
  return issue_pair(user->at("user_id").get<std::string>(),
                    user->at("roles").get<std::vector<std::string>>(), family, jti, refresh_exp);
}

TokenPair AuthService::refresh(std::string_view refresh_token) {
  Claims claims;
  try {
    claims = jwt_.verify(refresh_token, clock_.now());
  } catch (const Error& e) {
    throw Error(Errc::unauthorized, std::string("refresh token rejected: ") + e.what());
  }
  if (claims.typ != "refresh" || !claims.fam) {
    throw Error(Errc::unauthorized, "not a refresh token");
  }
  const std::string key = family_key(*claims.fam);
  const auto stored = families_.get(key);
  if (!stored) throw Error(Errc::unauthorized, "refresh family unknown or expired");
  json entry = json::parse(*stored);
  if (entry.at("revoked").get<bool>()) throw Error(Errc::family_revoked, "refresh family revoked");
  if (entry.at("current").get<std::string>() != claims.jti) {
    revoke_family(*claims.fam);
    throw Error(Errc::family_revoked, "refresh token reuse detected; family revoked");
  }

  const std::string next = new_uuid();
  json rotated = entry;
  rotated["current"] = next;
  if (!families_.compare_and_swap(key, *stored, rotated.dump())) {
    // Someone else rotated this token first: the same token was used twice.
    revoke_family(*claims.fam);
    throw Error(Errc::family_revoked, "concurrent refresh reuse detected; family revoked");
  }
  const auto user = find_user(claims.sub);
  if (!user) throw Error(Errc::unauthorized, "account no longer exists");
  return issue_pair(user->user_id, user->roles, *claims.fam, next, claims.exp);
}

void AuthService::logout(std::string_view refresh_token) {
  Claims claims;
  try {
    claims = jwt_.verify_ignoring_expiry(refresh_token);
  } catch (const Error& e) {
    if (e.code() == Errc::token_malformed) throw Error(Errc::decode, e.what());
    throw Error(Errc::unauthorized, e.what());
  }
  if (claims.typ != "refresh" || !claims.fam) throw Error(Errc::decode, "not a refresh token");
  revoke_family(*claims.fam);
}

Claims AuthService::verify_access_token(std::string_view token) const {
  Claims claims = jwt_.verify(token, clock_.now());
  if (claims.typ != "access") throw Error(Errc::unauthorized, "not an access token");
  return claims;
}

void AuthService::check_csrf(std::string_view refresh_token, std::string_view csrf_token) const {
  Claims claims;
  try {
    claims = jwt_.verify_ignoring_expiry(refresh_token);
  } catch (const Error& e) {
    if (e.code() == Errc::token_malformed) throw Error(Errc::decode, e.what());
    throw Error(Errc::unauthorized, e.what());
  }
  if (!claims.csrf || csrf_token.empty() ||
      !constant_time_equal(as_bytes(*claims.csrf), as_bytes(sha256_hex(csrf_token)))) {
    throw Error(Errc::forbidden, "CSRF token missing or mismatched");
  }
}

std::string AuthService::issue_service_token(std::string_view client_id,
                                             std::string_view client_secret) {
  const auto it = config_.service_clients.find(std::string(client_id));
  if (it == config_.service_clients.end() ||
      !constant_time_equal(as_bytes(it->second), as_bytes(client_secret))) {
    throw Error(Errc::unauthorized, "invalid service credentials");
  }
  const std::int64_t now = seconds(clock_.now());
  Claims c;
  c.sub = "service:" + it->first;
  c.roles = {std::string(roles::kService)};
  c.iat = now;
  c.exp = now + config_.service_ttl.count();
  c.jti = new_uuid();
  c.typ = "access";
  return jwt_.sign(c);
}

std::optional<UserProfile> AuthService::find_user(const std::string& user_id) const {
  const auto doc = users_.get(kUsers, user_id);
  if (!doc) return std::nullopt;
  return profile_from(*doc);
}

std::optional<UserProfile> AuthService::trusted_entity() const {
  const auto slot = users_.get(kSingletons, kTrustedEntitySlot);
  if (!slot) return std::nullopt;
  return find_user(slot->at("user_id").get<std::string>());
}

TokenPair AuthService::issue_pair(const std::string& user_id,
                                  const std::vector<std::string>& roles,
                                  const std::string& family,
                                  const std::string& jti,
                                  std::int64_t refresh_exp) {
  const std::int64_t now = seconds(clock_.now());
  Bytes csrf_raw(32);
  fill_random(csrf_raw);
  TokenPair pair;
  pair.csrf_token = base64url_encode(csrf_raw);

  Claims access;
  access.sub = user_id;
  access.roles = roles;
  access.iat = now;
  access.exp = std::min(now + config_.access_ttl.count(), refresh_exp);
  access.jti = new_uuid();
  access.typ = "access";

  Claims refresh = access;
  refresh.exp = refresh_exp;
  refresh.jti = jti;
  refresh.typ = "refresh";
  refresh.fam = family;
  refresh.csrf = sha256_hex(pair.csrf_token);

  pair.access_token = jwt_.sign(access);
  pair.refresh_token = jwt_.sign(refresh);
  pair.access_expires_at = access.exp;
  pair.refresh_expires_at = refresh.exp;
  return pair;
}

void AuthService::revoke_family(const std::string& family) {
  const std::string key = family_key(family);
  for (;;) {
    const auto stored = families_.get(key);
    if (!stored) return;
    json entry = json::parse(*stored);
    if (entry.at("revoked").get<bool>()) return;
    entry["revoked"] = true;
    if (families_.compare_and_swap(key, *stored, entry.dump())) return;
  }
}

}  // namespace ehrshare::auth
