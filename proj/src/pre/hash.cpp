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

#include "ehrshare/pre/hash.hpp"

#include <openssl/evp.h>

#include <array>

#include "ehrshare/common/error.hpp"

namespace ehrshare::pre {
namespace {

void append_len_prefixed(Bytes& buffer, ByteView data) {
  const auto n = static_cast<std::uint32_t>(data.size());
  for (int shift = 24; shift >= 0; shift -= 8) {
    buffer.push_back(static_cast<std::uint8_t>(n >> shift));
  }
  buffer.insert(buffer.end(), data.begin(), data.end());
}

}  // namespace

ScalarHasher::ScalarHasher(std::string_view dst) { append_len_prefixed(buffer_, as_bytes(dst)); }

ScalarHasher& ScalarHasher::update(ByteView data) {
  append_len_prefixed(buffer_, data);
  return *this;
}

ScalarHasher& ScalarHasher::update(const Point& p) { return update(p.to_bytes()); }

ScalarHasher& ScalarHasher::update(const Scalar& s) { return update(s.to_bytes()); }

Scalar ScalarHasher::finalize() const {
  std::array<std::uint8_t, 64> digest{};
  unsigned int len = 0;
  if (EVP_Digest(buffer_.data(), buffer_.size(), digest.data(), &len, EVP_sha512(), nullptr) !=
      1) {
    throw Error(Errc::internal, "EVP_Digest(sha512)");
  }
  return Scalar::from_bytes_reduced(digest);
}

}  // namespace ehrshare::pre
