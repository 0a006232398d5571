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

#include "ehrshare/net/auth_http.hpp"

#include <chrono>

#include "ehrshare/net/http.hpp"

namespace ehrshare::net {
namespace {

using nlohmann::json;

std::string refresh_cookie_header(const std::string& token, std::int64_t max_age) {
  return std::string(kRefreshCookie) + "=" + token + "; Path=/auth; Max-Age=" +
         std::to_string(std::max<std::int64_t>(max_age, 0)) + "; Secure; HttpOnly; SameSite=Strict";
}

json session_body(const auth::TokenPair& pair, const std::string& user_id) {
  return {{"user_id", user_id},
          {"access_token", pair.access_token},
          {"csrf_token", pair.csrf_token},
          {"access_expires_at", pair.access_expires_at},
          {"refresh_expires_at", pair.refresh_expires_at}};
}

void send_pair(httplib::Response& res, const auth::TokenPair& pair, const std::string& user_id,
               std::int64_t now_s) {
  res.set_header("Set-Cookie", refresh_cookie_header(pair.refresh_token, pair.refresh_expires_at - now_s));
  res.set_header("Cache-Control", "no-store");
  write_json(res, session_body(pair, user_id));
}

std::string required_cookie(const httplib::Request& req) {
  auto v = cookie_value(req.get_header_value("Cookie"), kRefreshCookie);
  if (!v || v->empty()) throw Error(Errc::unauthorized, "missing refresh cookie");
  return *v;
}

void require_service(const httplib::Request& req, const auth::AuthService& service) {
  const auto claims = authenticate(req, service);
  if (!claims.has_role(auth::roles::kService)) throw Error(Errc::forbidden, "service token required");
}

std::int64_t now_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Session session_from(const httplib::Response& res) {
  const json body = json::parse(res.body);
  Session s;
  s.user_id = body.at("user_id").get<std::string>();
  s.access_token = body.at("access_token").get<std::string>();
  s.csrf_token = body.at("csrf_token").get<std::string>();
  s.access_expires_at = body.at("access_expires_at").get<std::int64_t>();
  s.refresh_expires_at = body.at("refresh_expires_at").get<std::int64_t>();
  s.set_cookie = res.get_header_value("Set-Cookie");
  const auto semi = s.set_cookie.find(';');
  const auto cookie = s.set_cookie.substr(0, semi);
  s.refresh_cookie = cookie_value(cookie, kRefreshCookie).value_or("");
  return s;
}

httplib::Headers cookie_headers(const Session& s) {
  return {{"Cookie", std::string(kRefreshCookie) + "=" + s.refresh_cookie},
          {kCsrfHeader, s.csrf_token}};
}

}  // namespace

json profile_to_json(const auth::UserProfile& p) {
  return {{"user_id", p.user_id},
          {"name", p.name},
          {"email", p.email},
          {"roles", p.roles},
          {"public_key", base64_encode(p.public_key)},
          {"verifying_key", base64_encode(p.verifying_key)}};
}

auth::UserProfile profile_from_json(const json& j) {
  return {j.at("user_id").get<std::string>(),
          j.at("name").get<std::string>(),
          j.at("email").get<std::string>(),
          j.at("roles").get<std::vector<std::string>>(),
          base64_decode(j.at("public_key").get<std::string>()),
          base64_decode(j.at("verifying_key").get<std::string>())};
}

json claims_to_json(const auth::Claims& c) {
  json j = {{"sub", c.sub}, {"roles", c.roles}, {"iat", c.iat},
            {"exp", c.exp}, {"jti", c.jti},     {"typ", c.typ}};
  if (c.fam) j["fam"] = *c.fam;
  return j;
}

auth::Claims claims_from_json(const json& j) {
  auth::Claims c;
  c.sub = j.at("sub").get<std::string>();
  c.roles = j.at("roles").get<std::vector<std::string>>();
  c.iat = j.at("iat").get<std::int64_t>();
  c.exp = j.at("exp").get<std::int64_t>();
  c.jti = j.at("jti").get<std::string>();
  c.typ = j.at("typ").get<std::string>();
  if (j.contains("fam")) c.fam = j.at("fam").get<std::string>();
  return c;
}

std::optional<std::string> cookie_value(const std::string& header, std::string_view name) {
  std::size_t pos = 0;
  while (pos < header.size()) {
    while (pos < header.size() && (header[pos] == ' ' || header[pos] == ';')) ++pos;
    const auto end = std::min(header.find(';', pos), header.size());
    const auto eq = header.find('=', pos);
    if (eq != std::string::npos && eq < end && std::string_view(header).substr(pos, eq - pos) == name) {
      return header.substr(eq + 1, end - eq - 1);
    }
    pos = end;
  }
  return std::nullopt;
}

void mount_auth_routes(httplib::Server& server, auth::AuthService& service) {
  server.Post("/auth/register", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto profile = service.register_user(auth::parse_register_request(parse_json_body(req.body)));
      write_json(res, profile_to_json(profile), 201);
    });
  });

  server.Post("/auth/login", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = parse_json_body(req.body);
      const auto pair = service.login(body.at("email").get<std::string>(),
                                      body.at("password").get<std::string>());
      send_pair(res, pair, service.verify_access_token(pair.access_token).sub, now_seconds());
    });
  });

  server.Post("/auth/refresh", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto token = required_cookie(req);
      service.check_csrf(token, req.get_header_value(kCsrfHeader));
      const auto pair = service.refresh(token);
      send_pair(res, pair, service.verify_access_token(pair.access_token).sub, now_seconds());
    });
  });

  server.Post("/auth/logout", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto token = required_cookie(req);
      service.check_csrf(token, req.get_header_value(kCsrfHeader));
      service.logout(token);
      res.set_header("Set-Cookie", refresh_cookie_header("", 0));
      write_json(res, {{"ok", true}});
    });
  });

  server.Get("/auth/verify", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { write_json(res, claims_to_json(authenticate(req, service))); });
  });

  server.Post("/auth/service-token", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = parse_json_body(req.body);
      const auto token = service.issue_service_token(body.at("client_id").get<std::string>(),
                                                     body.at("client_secret").get<std::string>());
      write_json(res, {{"access_token", token},
                       {"expires_at", service.verify_access_token(token).exp}});
    });
  });

  server.Get(R"(/auth/users/([0-9a-f-]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      require_service(req, service);
      const auto user = service.find_user(req.matches[1]);
      if (!user) throw Error(Errc::not_found, "no such user");
      write_json(res, profile_to_json(*user));
    });
  });

  server.Get("/auth/trusted-entity", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      require_service(req, service);
      const auto user = service.trusted_entity();
      if (!user) throw Error(Errc::not_found, "no trusted entity registered");
      write_json(res, profile_to_json(*user));
    });
  });
}

HttpAuthClient::HttpAuthClient(std::string base_url, std::string client_id, std::string client_secret)
    : base_url_(std::move(base_url)),
      client_id_(std::move(client_id)),
      client_secret_(std::move(client_secret)) {}

auth::UserProfile HttpAuthClient::register_user(const json& body) const {
  auto cli = make_client(base_url_);
  return profile_from_json(json::parse(expect_ok(cli.Post("/auth/register", body.dump(), "application/json")).body));
}

Session HttpAuthClient::login(const std::string& email, const std::string& password) const {
  auto cli = make_client(base_url_);
  const json body = {{"email", email}, {"password", password}};
  return session_from(expect_ok(cli.Post("/auth/login", body.dump(), "application/json")));
}

Session HttpAuthClient::refresh(const Session& session) const {
  auto cli = make_client(base_url_);
  return session_from(expect_ok(cli.Post("/auth/refresh", cookie_headers(session), "", "application/json")));
}

void HttpAuthClient::logout(const Session& session) const {
  auto cli = make_client(base_url_);
  expect_ok(cli.Post("/auth/logout", cookie_headers(session), "", "application/json"));
}

auth::Claims HttpAuthClient::verify_access_token(std::string_view token) const {
  auto cli = make_client(base_url_);
  const httplib::Headers headers{{"Authorization", "Bearer " + std::string(token)}};
  return claims_from_json(json::parse(expect_ok(cli.Get("/auth/verify", headers)).body));
}

std::string HttpAuthClient::service_token() const {
  std::lock_guard lock(mu_);
  if (!token_.empty() && now_seconds() + 60 < token_exp_) return token_;
  auto cli = make_client(base_url_);
  const json body = {{"client_id", client_id_}, {"client_secret", client_secret_}};
  const json got =
      json::parse(expect_ok(cli.Post("/auth/service-token", body.dump(), "application/json")).body);
  token_ = got.at("access_token").get<std::string>();
  token_exp_ = got.at("expires_at").get<std::int64_t>();
  return token_;
}

std::optional<auth::UserProfile> HttpAuthClient::find_user(const std::string& user_id) const {
  auto cli = make_client(base_url_);
  const httplib::Headers headers{{"Authorization", "Bearer " + service_token()}};
  const auto res = cli.Get("/auth/users/" + user_id, headers);
  if (res && res->status == 404) return std::nullopt;
  return profile_from_json(json::parse(expect_ok(res).body));
}

std::optional<auth::UserProfile> HttpAuthClient::trusted_entity() const {
  auto cli = make_client(base_url_);
  const httplib::Headers headers{{"Authorization", "Bearer " + service_token()}};
  const auto res = cli.Get("/auth/trusted-entity", headers);
  if (res && res->status == 404) return std::nullopt;
  return profile_from_json(json::parse(expect_ok(res).body));
}

}  // namespace ehrshare::net
