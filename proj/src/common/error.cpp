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

#include "ehrshare/common/error.hpp"

#include <array>
#include <utility>

namespace ehrshare {
namespace {

constexpr std::array<std::pair<Errc, std::string_view>, 23> kNames{{
    {Errc::validation, "validation"},
    {Errc::decode, "decode"},
    {Errc::parameter, "parameter"},
    {Errc::size, "size"},
    {Errc::capsule, "capsule"},
    {Errc::threshold, "threshold"},
    {Errc::verification, "verification"},
    {Errc::decryption, "decryption"},
    {Errc::entropy, "entropy"},
    {Errc::unauthorized, "unauthorized"},
    {Errc::token_malformed, "token_malformed"},
    {Errc::token_signature, "token_signature"},
    {Errc::token_expired, "token_expired"},
    {Errc::family_revoked, "family_revoked"},
    {Errc::forbidden, "forbidden"},
    {Errc::not_found, "not_found"},
    {Errc::conflict, "conflict"},
    {Errc::state, "state"},
    {Errc::business_rule, "business_rule"},
    {Errc::configuration, "configuration"},
    {Errc::integrity, "integrity"},
    {Errc::unavailable, "unavailable"},
    {Errc::internal, "internal"},
}};

}  // namespace

std::string_view errc_name(Errc code) noexcept {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "internal";
}

std::optional<Errc> errc_from_name(std::string_view name) noexcept {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

}  // namespace ehrshare
