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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ehrshare {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline std::string to_string(ByteView b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

// Strict codecs: decoders reject non-canonical input (bad alphabet, wrong
// padding, nonzero trailing bits) with Errc::decode.
std::string base64_encode(ByteView data);
Bytes base64_decode(std::string_view text);
std::string base64url_encode(ByteView data);
Bytes base64url_decode(std::string_view text);
std::string hex_encode(ByteView data);
Bytes hex_decode(std::string_view text);

// Constant-time equality for secrets and MACs.
bool constant_time_equal(ByteView a, ByteView b) noexcept;

}  // namespace ehrshare
