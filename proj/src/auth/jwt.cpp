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

#include "ehrshare/auth/jwt.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <algorithm>
#include <array>

#include <json.hpp>

#include "ehrshare/common/error.hpp"

namespace ehrshare::auth {
namespace {

using nlohmann::json;

constexpr std::string_view kHeader = R"({"alg":"HS256","typ":"JWT"})";

std::array<std::uint8_t, 32> hmac(ByteView key, std::string_view data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
           reinterpret_cast<const unsigned char*>(data.data()), data.size(), out.data(),
           &len) == nullptr ||
      len != out.size()) {
    throw Error(Errc::internal, "HMAC-SHA256 failed");
  }
  return out;
}

[[noreturn]] void malformed(const std::string& why) {
  throw Error(Errc::token_malformed, "malformed token: " + why);
}

json parse_segment(std::string_view segment) {
  Bytes raw;
  try {
    raw = base64url_decode(segment);
  } catch (const Error&) {
    malformed("bad base64url");
  }
  json j = json::parse(raw.begin(), raw.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) malformed("not a JSON object");
  return j;
}

Claims claims_from_json(const json& j) {
  Claims c;
  try {
    c.sub = j.at("sub").get<std::string>();
    c.iat = j.at("iat").get<std::int64_t>();
    c.exp = j.at("exp").get<std::int64_t>();
    c.jti = j.at("jti").get<std::string>();
    c.typ = j.at("typ").get<std::string>();
    c.roles = j.at("roles").get<std::vector<std::string>>();
    if (j.contains("fam")) c.fam = j.at("fam").get<std::string>();
    if (j.contains("csrf")) c.csrf = j.at("csrf").get<std::string>();
  } catch (const json::exception& e) {
    malformed(e.what());
  }
  return c;
}

}  // namespace

bool Claims::has_role(std::string_view role) const {
  return std::find(roles.begin(), roles.end(), role) != roles.end();
}

JwtCodec::JwtCodec(Bytes key) : key_(std::move(key)) {
  if (key_.size() < 32) throw Error(Errc::configuration, "JWT key must be at least 32 bytes");
}

std::string JwtCodec::sign(const Claims& c) const {
  json j = {{"sub", c.sub}, {"roles", c.roles}, {"iat", c.iat},
            {"exp", c.exp}, {"jti", c.jti},     {"typ", c.typ}};
  if (c.fam) j["fam"] = *c.fam;
  if (c.csrf) j["csrf"] = *c.csrf;
  std::string token = base64url_encode(as_bytes(kHeader)) + "." + base64url_encode(as_bytes(j.dump()));
  const auto mac = hmac(key_, token);
  token += ".";
  token += base64url_encode(mac);
  return token;
}

Claims JwtCodec::verify_ignoring_expiry(std::string_view token) const {
  const auto first = token.find('.');
  const auto second = first == std::string_view::npos ? first : token.find('.', first + 1);
  if (second == std::string_view::npos || token.find('.', second + 1) != std::string_view::npos) {
    malformed("expected three segments");
  }
  const json header = parse_segment(token.substr(0, first));
  if (header.value("alg", "") != "HS256" || header.value("typ", "") != "JWT" ||
      header.size() != 2) {
    malformed("unsupported header");
  }
  Bytes sig;
  try {
    sig = base64url_decode(token.substr(second + 1));
  } catch (const Error&) {
    malformed("bad signature encoding");
  }
  const auto expected = hmac(key_, token.substr(0, second));
  if (!constant_time_equal(sig, expected)) {
    throw Error(Errc::token_signature, "token signature mismatch");
  }
  return claims_from_json(parse_segment(token.substr(first + 1, second - first - 1)));
}

Claims JwtCodec::verify(std::string_view token, Timestamp now) const {
  Claims c = verify_ignoring_expiry(token);
  if (to_millis(now) >= c.exp * 1000) throw Error(Errc::token_expired, "token expired");
  return c;
}

std::string sha256_hex(std::string_view data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
  return hex_encode(out);
}

}  // namespace ehrshare::auth
