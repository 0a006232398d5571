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

#include "ehrshare/auth/password.hpp"

#include <openssl/evp.h>
#include <openssl/kdf.h>
#include <openssl/rand.h>

#include <array>
#include <charconv>
#include <vector>

#include "ehrshare/common/bytes.hpp"
#include "ehrshare/common/error.hpp"

namespace ehrshare::auth {
namespace {

constexpr std::size_t kSaltSize = 16;
constexpr std::size_t kHashSize = 32;

Bytes scrypt(std::string_view password, ByteView salt, const PasswordParams& p) {
  Bytes out(kHashSize);
  const std::uint64_t n = std::uint64_t{1} << p.log2_n;
  const std::uint64_t maxmem = 128 * n * p.r * (p.p + 2) + (std::uint64_t{1} << 20);
  if (EVP_PBE_scrypt(password.data(), password.size(), salt.data(), salt.size(), n, p.r, p.p,
                     maxmem, out.data(), out.size()) != 1) {
    throw Error(Errc::internal, "scrypt failed");
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

template <typename T>
bool parse_kv(std::string_view kv, std::string_view key, T& out) {
  if (kv.substr(0, key.size()) != key || kv.size() <= key.size() || kv[key.size()] != '=') {
    return false;
  }
  const auto v = kv.substr(key.size() + 1);
  return std::from_chars(v.data(), v.data() + v.size(), out).ec == std::errc{};
}

}  // namespace

std::string hash_password(std::string_view password, const PasswordParams& params) {
  std::array<std::uint8_t, kSaltSize> salt{};
  if (RAND_bytes(salt.data(), static_cast<int>(salt.size())) != 1) {
    throw Error(Errc::entropy, "RAND_bytes failed");
  }
  const Bytes h = scrypt(password, salt, params);
  return "$scrypt$ln=" + std::to_string(params.log2_n) + ",r=" + std::to_string(params.r) +
         ",p=" + std::to_string(params.p) + "$" + base64_encode(salt) + "$" + base64_encode(h);
}

bool verify_password(std::string_view password, std::string_view encoded) {
  const auto parts = split(encoded, '$');
  if (parts.size() != 5 || !parts[0].empty() || parts[1] != "scrypt") return false;
  const auto costs = split(parts[2], ',');
  if (costs.size() != 3) return false;
  unsigned ln = 0;
  PasswordParams params;
  if (!parse_kv(costs[0], "ln", ln) || !parse_kv(costs[1], "r", params.r) ||
      !parse_kv(costs[2], "p", params.p) || ln == 0 || ln > 24 || params.r == 0 ||
      params.p == 0) {
    return false;
  }
  params.log2_n = static_cast<std::uint8_t>(ln);
  try {
    const Bytes salt = base64_decode(parts[3]);
    const Bytes expected = base64_decode(parts[4]);
    return constant_time_equal(scrypt(password, salt, params), expected);
  } catch (const Error&) {
    return false;
  }
}

}  // namespace ehrshare::auth
