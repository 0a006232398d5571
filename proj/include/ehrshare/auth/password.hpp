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
#include <string>
#include <string_view>

namespace ehrshare::auth {

// scrypt cost parameters. The default uses 32 MiB per hash.
struct PasswordParams {
  std::uint8_t log2_n = 15;
  std::uint32_t r = 8;
  std::uint32_t p = 1;
};

// "$scrypt$ln=<log2_n>,r=<r>,p=<p>$<salt b64>$<hash b64>"
std::string hash_password(std::string_view password, const PasswordParams& params = {});

// False for a wrong password or a malformed hash string.
bool verify_password(std::string_view password, std::string_view encoded);

}  // namespace ehrshare::auth
